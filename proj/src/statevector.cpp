// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include "maxent/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace maxent {

namespace {

constexpr int kMaxWidth = 40;
constexpr int kMaxFusedTargets = 7;
constexpr int kMaxCompileWidth = 22;

bool is_diagonal(GateKind k) {
  return k == GateKind::Z || k == GateKind::RZ || k == GateKind::Phase;
}

bool has_angle(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ ||
         k == GateKind::Phase;
}

char kind_char(GateKind k) {
  switch (k) {
    case GateKind::H: return 'H';
    case GateKind::X: return 'X';
    case GateKind::Y: return 'Y';
    case GateKind::Z: return 'Z';
    case GateKind::RX: return 'x';
    case GateKind::RY: return 'y';
    case GateKind::RZ: return 'z';
    case GateKind::Phase: return 'p';
    case GateKind::Sub: return 'S';
  }
  return '?';
}

std::uint64_t control_mask(const std::vector<Control>& cs) {
  std::uint64_t m = 0;
  for (const auto& c : cs) m |= std::uint64_t{1} << c.qubit;
  return m;
}

std::uint64_t control_value(const std::vector<Control>& cs) {
  std::uint64_t v = 0;
  for (const auto& c : cs)
    if (c.value) v |= std::uint64_t{1} << c.qubit;
  return v;
}

std::uint64_t support_of(const Circuit& c,
                         std::unordered_map<const Circuit*, std::uint64_t>& memo) {
  std::uint64_t s = 0;
  for (const auto& op : c.ops()) {
    s |= control_mask(op.controls);
    if (op.kind == GateKind::Sub) {
      auto it = memo.find(op.sub.get());
      if (it == memo.end())
        it = memo.emplace(op.sub.get(), support_of(*op.sub, memo)).first;
      s |= it->second;
    } else {
      s |= std::uint64_t{1} << op.target;
    }
  }
  return s;
}

void check_controls(const std::vector<Control>& cs, int width, std::uint64_t avoid) {
  std::uint64_t seen = 0;
  for (const auto& c : cs) {
    if (c.qubit < 0 || c.qubit >= width)
      throw Error(ErrorCode::kOutOfRange, "control qubit out of range");
    const std::uint64_t b = std::uint64_t{1} << c.qubit;
    if ((b & avoid) || (b & seen))
      throw Error(ErrorCode::kInvalidArgument, "control overlaps target or repeats");
    seen |= b;
  }
}

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kOutOfRange: return "out_of_range";
    case ErrorCode::kZeroProbability: return "zero_probability";
    case ErrorCode::kLayoutMismatch: return "layout_mismatch";
    case ErrorCode::kCapExceeded: return "cap_exceeded";
    case ErrorCode::kNotConverged: return "not_converged";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

// ---------------------------------------------------------------- Circuit

Circuit::Circuit(int width) : width_(width) {
  if (width < 1 || width > kMaxWidth)
    throw Error(ErrorCode::kOutOfRange, "circuit width out of range");
}

Circuit& Circuit::gate(GateKind kind, int target, double theta,
                       std::vector<Control> controls) {
  if (kind == GateKind::Sub)
    throw Error(ErrorCode::kInvalidArgument, "use append() for sub-circuits");
  if (target < 0 || target >= width_)
    throw Error(ErrorCode::kOutOfRange, "target qubit out of range");
  if (!std::isfinite(theta))
    throw Error(ErrorCode::kInvalidArgument, "non-finite rotation parameter");
  check_controls(controls, width_, std::uint64_t{1} << target);
  Op op;
  op.kind = kind;
  op.target = target;
  op.theta = has_angle(kind) ? theta : 0.0;
  op.controls = std::move(controls);
  ops_.push_back(std::move(op));
  return *this;
}

Circuit& Circuit::append(std::shared_ptr<const Circuit> sub,
                         std::vector<Control> controls, bool adjoint) {
  if (!sub) throw Error(ErrorCode::kInvalidArgument, "null sub-circuit");
  if (sub->width() > width_)
    throw Error(ErrorCode::kOutOfRange, "sub-circuit wider than parent");
  std::unordered_map<const Circuit*, std::uint64_t> memo;
  check_controls(controls, width_, support_of(*sub, memo));
  Op op;
  op.kind = GateKind::Sub;
  op.controls = std::move(controls);
  op.sub = std::move(sub);
  op.adjoint = adjoint;
  ops_.push_back(std::move(op));
  return *this;
}

Circuit& Circuit::extend(const Circuit& other) {
  if (other.width() > width_)
    throw Error(ErrorCode::kOutOfRange, "inlined circuit wider than parent");
  ops_.insert(ops_.end(), other.ops().begin(), other.ops().end());
  return *this;
}

Circuit adjoint(const Circuit& c) {
  Circuit out(c.width());
  for (auto it = c.ops().rbegin(); it != c.ops().rend(); ++it) {
    if (it->kind == GateKind::Sub) {
      out.append(it->sub, it->controls, !it->adjoint);
    } else {
      out.gate(it->kind, it->target, has_angle(it->kind) ? -it->theta : 0.0,
               it->controls);
    }
  }
  return out;
}

namespace {

CircuitPtr remap_impl(const Circuit& c, const std::vector<int>& map, int width,
                      std::unordered_map<const Circuit*, CircuitPtr>& memo) {
  auto out = std::make_shared<Circuit>(width);
  auto mq = [&](int q) {
    const int r = map.at(q);
    if (r < 0) throw Error(ErrorCode::kOutOfRange, "qubit missing from remap");
    return r;
  };
  for (const auto& op : c.ops()) {
    std::vector<Control> cs;
    cs.reserve(op.controls.size());
    for (const auto& ctl : op.controls) cs.push_back({mq(ctl.qubit), ctl.value});
    if (op.kind == GateKind::Sub) {
      auto it = memo.find(op.sub.get());
      if (it == memo.end())
        it = memo.emplace(op.sub.get(), remap_impl(*op.sub, map, width, memo)).first;
      out->append(it->second, std::move(cs), op.adjoint);
    } else {
      out->gate(op.kind, mq(op.target), op.theta, std::move(cs));
    }
  }
  return out;
}

void signature_impl(const Circuit& c, std::ostringstream& os,
                    std::unordered_map<const Circuit*, int>& ids) {
  for (const auto& op : c.ops()) {
    os << kind_char(op.kind);
    if (op.kind != GateKind::Sub) os << op.target;
    for (const auto& ctl : op.controls) os << (ctl.value ? '+' : '-') << ctl.qubit;
    if (op.kind == GateKind::Sub) {
      if (op.adjoint) os << '\'';
      auto it = ids.find(op.sub.get());
      if (it == ids.end()) {
        const int id = static_cast<int>(ids.size());
        ids.emplace(op.sub.get(), id);
        os << '#' << id << '{';
        signature_impl(*op.sub, os, ids);
        os << '}';
      } else {
        os << '#' << it->second;
      }
    }
    os << ';';
  }
}

std::size_t count_impl(const Circuit& c,
                       std::unordered_map<const Circuit*, std::size_t>& memo) {
  std::size_t n = 0;
  for (const auto& op : c.ops()) {
    if (op.kind != GateKind::Sub) {
      ++n;
      continue;
    }
    auto it = memo.find(op.sub.get());
    if (it == memo.end()) it = memo.emplace(op.sub.get(), count_impl(*op.sub, memo)).first;
    n += it->second;
  }
  return n;
}

}  // namespace

CircuitPtr remap(const Circuit& c, const std::vector<int>& map, int new_width) {
  std::unordered_map<const Circuit*, CircuitPtr> memo;
  return remap_impl(c, map, new_width, memo);
}

std::string structure_signature(const Circuit& c) {
  std::ostringstream os;
  std::unordered_map<const Circuit*, int> ids;
  os << 'w' << c.width() << ':';
  signature_impl(c, os, ids);
  return os.str();
}

std::size_t flat_gate_count(const Circuit& c) {
  std::unordered_map<const Circuit*, std::size_t> memo;
  return count_impl(c, memo);
}

// ---------------------------------------------------------------- layout

int RegisterLayout::add(const std::string& name, int width) {
  if (width < 1) throw Error(ErrorCode::kInvalidArgument, "register width must be >= 1");
  if (contains(name)) throw Error(ErrorCode::kInvalidArgument, "duplicate register " + name);
  regs_.push_back({name, total_, width});
  total_ += width;
  if (total_ > kMaxWidth) throw Error(ErrorCode::kCapExceeded, "layout too wide");
  return regs_.back().offset;
}

const Register& RegisterLayout::find(const std::string& name) const {
  for (const auto& r : regs_)
    if (r.name == name) return r;
  throw Error(ErrorCode::kInvalidArgument, "unknown register " + name);
}

bool RegisterLayout::contains(const std::string& name) const {
  return std::any_of(regs_.begin(), regs_.end(),
                     [&](const Register& r) { return r.name == name; });
}

std::vector<int> RegisterLayout::qubits(const std::string& name) const {
  const auto& r = find(name);
  std::vector<int> q(r.width);
  for (int i = 0; i < r.width; ++i) q[i] = r.offset + i;
  return q;
}

bool operator==(const RegisterLayout& a, const RegisterLayout& b) {
  if (a.regs_.size() != b.regs_.size()) return false;
  for (std::size_t i = 0; i < a.regs_.size(); ++i) {
    if (a.regs_[i].name != b.regs_[i].name || a.regs_[i].width != b.regs_[i].width)
      return false;
  }
  return true;
}

Statevector::Statevector(RegisterLayout layout) : layout_(std::move(layout)) {
  if (layout_.total_width() < 1)
    throw Error(ErrorCode::kInvalidArgument, "empty layout");
  amp_ = CVector::Zero(Eigen::Index{1} << layout_.total_width());
  amp_(0) = 1.0;
}

Statevector::Statevector(RegisterLayout layout, CVector amplitudes)
    : layout_(std::move(layout)), amp_(std::move(amplitudes)) {
  if (amp_.size() != (Eigen::Index{1} << layout_.total_width()))
    throw Error(ErrorCode::kLayoutMismatch, "amplitude count does not match layout");
  if (!amp_.allFinite()) throw Error(ErrorCode::kInvalidArgument, "non-finite amplitude");
}

// ---------------------------------------------------------------- simulator

struct Simulator::Impl {
  struct Info {
    CircuitPtr keep;
    std::uint64_t support = 0;
    std::uint64_t nondiag = 0;
    double cost = 0.0;  // full-state passes when expanded
    bool fusable = false;
  };
  struct Compiled {
    CircuitPtr keep;
    CircuitPtr local;
    std::vector<int> dq;
    std::vector<std::size_t> offsets;
    std::uint64_t tmask = 0;
    std::vector<CMatrix> blocks;
  };

  bool fusion = true;
  std::unordered_map<const Circuit*, Info> infos;
  std::unordered_map<const Circuit*, std::shared_ptr<Compiled>> compiled;

  const Info& info_of(const CircuitPtr& c) {
    auto it = infos.find(c.get());
    if (it != infos.end()) return it->second;
    Info in;
    in.keep = c;
    for (const auto& op : c->ops()) {
      in.support |= control_mask(op.controls);
      if (op.kind == GateKind::Sub) {
        const Info& ch = info_of(op.sub);
        in.support |= ch.support;
        in.nondiag |= ch.nondiag;
        in.cost += ch.fusable ? std::ldexp(1.0, std::popcount(ch.nondiag)) : ch.cost;
      } else {
        const std::uint64_t b = std::uint64_t{1} << op.target;
        in.support |= b;
        if (!is_diagonal(op.kind)) in.nondiag |= b;
        in.cost += 1.0;
      }
    }
    const int t = std::popcount(in.nondiag);
    const int d = std::popcount(in.support & ~in.nondiag);
    in.fusable = fusion && t <= kMaxFusedTargets && d + 2 * t <= kMaxCompileWidth &&
                 in.cost > std::ldexp(1.0, t);
    return infos.emplace(c.get(), std::move(in)).first->second;
  }

  static void apply_gate(CVector& a, int width, GateKind kind, int target,
                         double theta, std::uint64_t cm, std::uint64_t cv) {
    const std::size_t n = std::size_t{1} << width;
    const std::size_t tm = std::size_t{1} << target;
    cplx* p = a.data();
    if (is_diagonal(kind)) {
      cplx d0 = 1.0, d1 = -1.0;
      if (kind == GateKind::RZ) {
        d0 = std::polar(1.0, -theta / 2);
        d1 = std::polar(1.0, theta / 2);
      } else if (kind == GateKind::Phase) {
        d0 = d1 = std::polar(1.0, theta);
      }
      const bool skip0 = d0 == cplx(1.0);
      for (std::size_t i = 0; i < n; ++i) {
        if ((i & cm) != cv) continue;
        if (i & tm) {
          p[i] *= d1;
        } else if (!skip0) {
          p[i] *= d0;
        }
      }
      return;
    }
    cplx u00, u01, u10, u11;
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i1(0.0, 1.0);
    switch (kind) {
      case GateKind::H: u00 = r; u01 = r; u10 = r; u11 = -r; break;
      case GateKind::X: u00 = 0; u01 = 1; u10 = 1; u11 = 0; break;
      case GateKind::Y: u00 = 0; u01 = -i1; u10 = i1; u11 = 0; break;
      case GateKind::RX: u00 = c; u01 = -i1 * s; u10 = -i1 * s; u11 = c; break;
      case GateKind::RY: u00 = c; u01 = -s; u10 = s; u11 = c; break;
      default: throw Error(ErrorCode::kInvalidArgument, "unsupported gate");
    }
    for (std::size_t base = 0; base < n; base += 2 * tm) {
      for (std::size_t lo = 0; lo < tm; ++lo) {
        const std::size_t i = base | lo;
        if ((i & cm) != cv) continue;
        const std::size_t j = i | tm;
        if (kind == GateKind::X) {
          std::swap(p[i], p[j]);
          continue;
        }
        const cplx a0 = p[i], a1 = p[j];
        p[i] = u00 * a0 + u01 * a1;
        p[j] = u10 * a0 + u11 * a1;
      }
    }
  }

  std::shared_ptr<Compiled> compile(const CircuitPtr& c) {
    auto it = compiled.find(c.get());
    if (it != compiled.end()) return it->second;
    const Info& in = info_of(c);
    auto out = std::make_shared<Compiled>();
    out->keep = c;
    std::vector<int> tq;
    for (int q = 0; q < c->width(); ++q) {
      const std::uint64_t b = std::uint64_t{1} << q;
      if (!(in.support & b)) continue;
      if (in.nondiag & b) {
        tq.push_back(q);
      } else {
        out->dq.push_back(q);
      }
    }
    const int nd = static_cast<int>(out->dq.size());
    const int nt = static_cast<int>(tq.size());
    std::vector<int> map(c->width(), -1);
    for (int k = 0; k < nd; ++k) map[out->dq[k]] = k;
    for (int k = 0; k < nt; ++k) map[tq[k]] = nd + k;
    const int lw = nd + 2 * nt;
    out->local = remap(*c, map, std::max(lw, 1));

    const std::size_t dim_t = std::size_t{1} << nt;
    const std::size_t dim_d = std::size_t{1} << nd;
    CVector local = CVector::Zero(Eigen::Index{1} << std::max(lw, 1));
    for (std::size_t d = 0; d < dim_d; ++d)
      for (std::size_t j = 0; j < dim_t; ++j) local(d | (j << nd) | (j << (nd + nt))) = 1.0;
    run(local, std::max(lw, 1), *out->local, false, 0, 0);

    out->blocks.assign(dim_d, CMatrix(dim_t, dim_t));
    for (std::size_t d = 0; d < dim_d; ++d)
      for (std::size_t j = 0; j < dim_t; ++j)
        for (std::size_t r = 0; r < dim_t; ++r)
          out->blocks[d](r, j) = local(d | (r << nd) | (j << (nd + nt)));

    out->offsets.assign(dim_t, 0);
    for (std::size_t j = 0; j < dim_t; ++j)
      for (int k = 0; k < nt; ++k)
        if (j >> k & 1) out->offsets[j] |= std::size_t{1} << tq[k];
    for (int q : tq) out->tmask |= std::uint64_t{1} << q;
    compiled.emplace(c.get(), out);
    return out;
  }

  static void apply_fused(CVector& a, int width, const Compiled& cb, bool adj,
                          std::uint64_t cm, std::uint64_t cv) {
    const std::size_t n = std::size_t{1} << width;
    const std::size_t dim = cb.offsets.size();
    CVector v(dim), w(dim);
    cplx* p = a.data();
    for (std::size_t i = 0; i < n; ++i) {
      if ((i & cb.tmask) || (i & cm) != cv) continue;
      std::size_t d = 0;
      for (std::size_t k = 0; k < cb.dq.size(); ++k) d |= ((i >> cb.dq[k]) & 1) << k;
      for (std::size_t j = 0; j < dim; ++j) v(j) = p[i + cb.offsets[j]];
      if (adj) {
        w.noalias() = cb.blocks[d].adjoint() * v;
      } else {
        w.noalias() = cb.blocks[d] * v;
      }
      for (std::size_t j = 0; j < dim; ++j) p[i + cb.offsets[j]] = w(j);
    }
  }

  void run(CVector& a, int width, const Circuit& c, bool adj, std::uint64_t cm,
           std::uint64_t cv) {
    const auto& ops = c.ops();
    const std::size_t n = ops.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Op& op = ops[adj ? n - 1 - k : k];
      const std::uint64_t m2 = cm | control_mask(op.controls);
      const std::uint64_t v2 = cv | control_value(op.controls);
      if (op.kind == GateKind::Sub) {
        const bool sub_adj = adj != op.adjoint;
        if (info_of(op.sub).fusable) {
          apply_fused(a, width, *compile(op.sub), sub_adj, m2, v2);
        } else {
          run(a, width, *op.sub, sub_adj, m2, v2);
        }
      } else {
        apply_gate(a, width, op.kind, op.target, adj ? -op.theta : op.theta, m2, v2);
      }
    }
  }
};

Simulator::Simulator() : impl_(std::make_unique<Impl>()) {}
Simulator::~Simulator() = default;

void Simulator::run(CVector& amps, int width, const Circuit& c, bool adjoint) {
  if (c.width() > width)
    throw Error(ErrorCode::kOutOfRange, "circuit wider than state");
  if (amps.size() != (Eigen::Index{1} << width))
    throw Error(ErrorCode::kLayoutMismatch, "state size does not match width");
  if (impl_->fusion != fusion_) {
    impl_->infos.clear();
    impl_->compiled.clear();
    impl_->fusion = fusion_;
  }
  impl_->run(amps, width, c, adjoint, 0, 0);
}

void Simulator::run(Statevector& state, const Circuit& c, bool adjoint) {
  run(state.mutable_amplitudes(), state.width(), c, adjoint);
}

Statevector apply(const Statevector& state, const Circuit& c) {
  Statevector out = state;
  Simulator sim;
  sim.run(out, c);
  return out;
}

Statevector apply(const Statevector& state, const Op& op) {
  Circuit c(state.width());
  if (op.kind == GateKind::Sub) {
    c.append(op.sub, op.controls, op.adjoint);
  } else {
    c.gate(op.kind, op.target, op.theta, op.controls);
  }
  return apply(state, c);
}

// ---------------------------------------------------------------- projections

CVector project(const CVector& amps, int width, const std::vector<int>& qubits,
                std::uint64_t outcome) {
  std::uint64_t qmask = 0, qval = 0;
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    if (qubits[k] < 0 || qubits[k] >= width)
      throw Error(ErrorCode::kOutOfRange, "post-selected qubit out of range");
    qmask |= std::uint64_t{1} << qubits[k];
    if (outcome >> k & 1) qval |= std::uint64_t{1} << qubits[k];
  }
  if (std::popcount(qmask) != static_cast<int>(qubits.size()))
    throw Error(ErrorCode::kInvalidArgument, "repeated post-selected qubit");
  std::vector<int> rest;
  for (int q = 0; q < width; ++q)
    if (!(qmask >> q & 1)) rest.push_back(q);
  const std::size_t m = std::size_t{1} << rest.size();
  CVector out(static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < m; ++r) {
    std::size_t idx = qval;
    for (std::size_t k = 0; k < rest.size(); ++k)
      if (r >> k & 1) idx |= std::size_t{1} << rest[k];
    out(static_cast<Eigen::Index>(r)) = amps(static_cast<Eigen::Index>(idx));
  }
  return out;
}

namespace {

PostSelection finish(CVector branch, RegisterLayout layout) {
  const double p = branch.squaredNorm();
  if (!(p > 1e-28)) throw Error(ErrorCode::kZeroProbability, "zero-probability outcome");
  branch /= std::sqrt(p);
  return {Statevector(std::move(layout), std::move(branch)), p};
}

}  // namespace

PostSelection post_select(const Statevector& state, const std::vector<int>& qubits,
                          std::uint64_t outcome) {
  if (static_cast<int>(qubits.size()) >= state.width())
    throw Error(ErrorCode::kInvalidArgument, "cannot post-select every qubit");
  CVector b = project(state.amplitudes(), state.width(), qubits, outcome);
  RegisterLayout rest;
  rest.add("rest", state.width() - static_cast<int>(qubits.size()));
  return finish(std::move(b), std::move(rest));
}

PostSelection post_select(const Statevector& state, const std::string& reg,
                          const std::string& outcome) {
  const Register& r = state.layout().find(reg);
  if (static_cast<int>(outcome.size()) != r.width)
    throw Error(ErrorCode::kInvalidArgument, "outcome width does not match register");
  std::uint64_t value = 0;
  for (char ch : outcome) {
    if (ch != '0' && ch != '1') throw Error(ErrorCode::kInvalidArgument, "outcome must be binary");
    value = (value << 1) | static_cast<std::uint64_t>(ch - '0');
  }
  if (r.width >= state.width())
    throw Error(ErrorCode::kInvalidArgument, "cannot post-select every qubit");
  CVector b = project(state.amplitudes(), state.width(), state.layout().qubits(reg), value);
  RegisterLayout rest;
  for (const auto& other : state.layout().registers())
    if (other.name != reg) rest.add(other.name, other.width);
  return finish(std::move(b), std::move(rest));
}

cplx inner_product(const Statevector& a, const Statevector& b) {
  if (!(a.layout() == b.layout()))
    throw Error(ErrorCode::kLayoutMismatch, "inner product of different layouts");
  return a.amplitudes().dot(b.amplitudes());
}

CMatrix extract_block(const Circuit& c, const std::vector<int>& ancillas) {
  const int w = c.width();
  if (w > kDenseMatrixCap)
    throw Error(ErrorCode::kCapExceeded, "circuit exceeds dense-matrix cap");
  std::uint64_t amask = 0;
  for (int q : ancillas) {
    if (q < 0 || q >= w) throw Error(ErrorCode::kOutOfRange, "ancilla out of range");
    amask |= std::uint64_t{1} << q;
  }
  std::vector<int> sys;
  for (int q = 0; q < w; ++q)
    if (!(amask >> q & 1)) sys.push_back(q);
  const std::size_t m = std::size_t{1} << sys.size();
  auto deposit = [&](std::size_t r) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < sys.size(); ++k)
      if (r >> k & 1) idx |= std::size_t{1} << sys[k];
    return idx;
  };
  CMatrix block(m, m);
  Simulator sim;
  CVector psi(Eigen::Index{1} << w);
  for (std::size_t col = 0; col < m; ++col) {
    psi.setZero();
    psi(deposit(col)) = 1.0;
    sim.run(psi, w, c);
    for (std::size_t row = 0; row < m; ++row) block(row, col) = psi(deposit(row));
  }
  return block;
}

CMatrix extract_block(const Circuit& c, int a) {
  if (a < 0 || a >= c.width()) throw Error(ErrorCode::kOutOfRange, "bad ancilla count");
  std::vector<int> anc;
  for (int q = c.width() - a; q < c.width(); ++q) anc.push_back(q);
  return extract_block(c, anc);
}

CMatrix circuit_unitary(const Circuit& c) { return extract_block(c, std::vector<int>{}); }

}  // namespace maxent
