// Copyright 2026 The sdi-selftest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sdi/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>

#include "sdi/parallel.hpp"

namespace sdi::sdp {

using linalg::cplx;

// ---------------------------------------------------------------- words

Word adjoint(const Word& w) { return Word(w.rbegin(), w.rend()); }

Word reduce(const Word& w) {
  Word out;
  for (int letter : w) {
    if (letter >= 0 && !out.empty() && out.back() == letter) {
      out.pop_back();
    } else {
      out.push_back(letter);
    }
  }
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (int letter : w) {
    if (!s.empty()) s += ' ';
    s += letter >= 0 ? "B" + std::to_string(letter) : "rho" + std::to_string(-letter - 1);
  }
  return s;
}

// ---------------------------------------------------------------- swap

std::array<std::array<Polynomial, 2>, 2> swap_T_polynomials() {
  const Word one{}, b0{0}, b1{1}, b0b1{0, 1}, b1b0{1, 0}, b0b1b0{0, 1, 0};
  std::array<std::array<Polynomial, 2>, 2> t;
  t[0][0] = {{2, one}, {2, b0}};
  t[1][1] = {{2, one}, {-2, b0}};
  t[0][1] = {{1, b1}, {-1, b1b0}, {1, b0b1}, {-1, b0b1b0}};
  t[1][0] = {{1, b1}, {1, b1b0}, {-1, b0b1}, {-1, b0b1b0}};
  return t;
}

SwapTable swap_T_operators(const Observable& b0, const Observable& b1) {
  if (b0.dim() != b1.dim()) throw DimensionError("swap_T_operators: observables differ in dimension");
  Realization r;
  r.observables = {b0, b1};
  const auto poly = swap_T_polynomials();
  SwapTable out;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      ComplexMatrix m = ComplexMatrix::zero(b0.dim());
      for (const auto& term : poly[i][k]) m += term.coef * word_operator(term.word, r);
      out[i][k] = m;
    }
  return out;
}

ComplexMatrix swap_operator(const Observable& b0, const Observable& b1) {
  if (b0.dim() != b1.dim()) throw DimensionError("swap_operator: observables differ in dimension");
  const int d = b0.dim();
  const ComplexMatrix id = ComplexMatrix::identity(d);
  const ComplexMatrix p0{{1, 0}, {0, 0}};
  const ComplexMatrix p1{{0, 0}, {0, 1}};
  const ComplexMatrix u = linalg::kron(id, p0) + linalg::kron(b1.op().matrix(), p1);
  const ComplexMatrix v = linalg::kron(0.5 * (id + b0.op().matrix()), ComplexMatrix::identity(2)) +
                          linalg::kron(0.5 * (id - b0.op().matrix()), linalg::pauli_x());
  return u * v * u;
}

// ---------------------------------------------------------------- moments

MomentLevel product_level(int num_states) {
  if (num_states < 1) throw DomainError("moment level needs at least one state");
  MomentLevel l;
  l.name = "product";
  l.num_states = num_states;
  l.q_words = {{}, {0}, {1}, {0, 1}, {1, 0}};
  l.r_words = {{}};
  for (int x = 0; x < num_states; ++x) l.r_words.push_back({state_letter(x)});
  for (const auto& q : l.q_words)
    for (const auto& r : l.r_words) l.words.push_back(concat(q, r));
  return l;
}

MomentLevel compact_level(int num_states) {
  if (num_states < 1) throw DomainError("moment level needs at least one state");
  MomentLevel l;
  l.name = "compact";
  l.num_states = num_states;
  l.words.push_back({});
  for (int x = 0; x < num_states; ++x) l.words.push_back({state_letter(x)});
  for (int y = 0; y < 2; ++y) l.words.push_back({y});
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < num_states; ++x) l.words.push_back({y, state_letter(x)});
  l.words.push_back({0, 1});
  l.words.push_back({1, 0});
  for (const Word& bb : {Word{0, 1}, Word{1, 0}})
    for (int x = 0; x < num_states; ++x) l.words.push_back(concat(bb, {state_letter(x)}));
  return l;
}

namespace {

ComplexMatrix random_orthogonal(int d, Rng& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd z(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) z(r, c) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  Eigen::MatrixXd q = qr.householderQ();
  for (int k = 0; k < d; ++k) {
    if (qr.matrixQR()(k, k) < 0) q.col(k) *= -1.0;
  }
  return ComplexMatrix(Eigen::MatrixXcd(q.cast<cplx>()));
}

}  // namespace

Realization sample_realization(int num_states, int num_observables, int d, Rng& rng, SampleMode mode) {
  if (d < 1) throw DomainError("sample_realization: dimension must be positive");
  Realization r;
  std::normal_distribution<double> g;
  for (int x = 0; x < num_states; ++x) {
    if (mode == SampleMode::complex) {
      r.states.push_back(quantum::random_pure_state(d, rng));
    } else {
      linalg::CVector v(d);
      for (int k = 0; k < d; ++k) v(k) = g(rng);
      r.states.push_back(State::from_ket(v));
    }
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int y = 0; y < num_observables; ++y) {
    int num_plus;
    if (d == 1 || u(rng) < 0.2) {
      num_plus = u(rng) < 0.5 ? 0 : d;
    } else {
      num_plus = std::uniform_int_distribution<int>(1, d - 1)(rng);
    }
    const ComplexMatrix basis =
        mode == SampleMode::complex ? quantum::random_unitary(d, rng) : random_orthogonal(d, rng);
    Eigen::VectorXcd diag(d);
    for (int k = 0; k < d; ++k) diag(k) = k < num_plus ? 1.0 : -1.0;
    const Eigen::MatrixXcd m = basis.eigen() * diag.asDiagonal() * basis.eigen().adjoint();
    r.observables.emplace_back(HermitianOperator(m));
  }
  return r;
}

ComplexMatrix word_operator(const Word& w, const Realization& r) {
  int d = 0;
  if (!r.states.empty()) d = r.states.front().dim();
  else if (!r.observables.empty()) d = r.observables.front().dim();
  else throw DimensionError("word_operator: empty realization");
  ComplexMatrix m = ComplexMatrix::identity(d);
  for (int letter : w) {
    if (letter >= 0) {
      if (letter >= static_cast<int>(r.observables.size())) throw DomainError("word letter out of range");
      m = m * r.observables[letter].op().matrix();
    } else {
      const int x = -letter - 1;
      if (x >= static_cast<int>(r.states.size())) throw DomainError("word letter out of range");
      m = m * r.states[x].rho().matrix();
    }
  }
  return m;
}

MomentMatrix moment_matrix(const MomentLevel& level, const Realization& r) {
  const int n = static_cast<int>(level.words.size());
  std::vector<ComplexMatrix> ops;
  ops.reserve(n);
  for (const auto& w : level.words) ops.push_back(word_operator(w, r));
  Eigen::MatrixXcd chi(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const cplx v = (ops[a].eigen().conjugate().array() * ops[b].eigen().array()).sum();
      chi(a, b) = v;
      chi(b, a) = std::conj(v);
    }
  return MomentMatrix{level.words, HermitianOperator(chi)};
}

MomentMatrix sample_moment_matrix(const MomentLevel& level, int d, Rng& rng, SampleMode mode) {
  return moment_matrix(level, sample_realization(level.num_states, level.num_observables, d, rng, mode));
}

std::pair<int, int> locate(const MomentLevel& level, const Word& target) {
  const Word t = reduce(target);
  const int n = static_cast<int>(level.words.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (reduce(concat(adjoint(level.words[a]), level.words[b])) == t) return {a, b};
    }
  throw DomainError("moment level has no entry for word " + to_string(target));
}

void MomentFunctional::add(std::pair<int, int> entry, cplx coef) {
  entries.push_back(entry);
  coef_re.push_back(coef.real());
  coef_im.push_back(coef.imag());
}

double MomentFunctional::evaluate(const HermitianOperator& chi) const {
  double v = 0.0;
  for (std::size_t t = 0; t < entries.size(); ++t) {
    const cplx e = chi(entries[t].first, entries[t].second);
    v += coef_re[t] * e.real() - coef_im[t] * e.imag();
  }
  return v;
}

MomentFunctional witness_functional(const MomentLevel& level, const Witness& w) {
  if (!w.binary() || w.num_measurements() != level.num_observables ||
      w.num_preparations() != level.num_states) {
    throw DimensionError("witness shape does not match the moment level");
  }
  MomentFunctional f;
  for (int x = 0; x < w.num_preparations(); ++x) {
    const auto tr = locate(level, {state_letter(x)});
    for (int y = 0; y < w.num_measurements(); ++y) {
      const auto corr = locate(level, {y, state_letter(x)});
      const double a0 = w.alpha(x, y, 0), a1 = w.alpha(x, y, 1);
      f.add(tr, 0.5 * (a0 + a1));
      f.add(corr, 0.5 * (a0 - a1));
    }
  }
  return f;
}

MomentFunctional swap_fidelity_functional(const MomentLevel& level, std::span<const State> ideal_states) {
  if (static_cast<int>(ideal_states.size()) != level.num_states) {
    throw DimensionError("one ideal state per preparation required");
  }
  const auto poly = swap_T_polynomials();
  const double norm = 1.0 / (4.0 * level.num_states);
  MomentFunctional f;
  for (int x = 0; x < level.num_states; ++x) {
    if (ideal_states[x].dim() != 2) throw DimensionError("swap references must be qubit states");
    const auto& ref = ideal_states[x].rho();
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        const cplx weight = norm * ref(i, k);
        if (weight == cplx(0.0)) continue;
        for (const auto& term : poly[i][k]) {
          f.add(locate(level, concat(term.word, {state_letter(x)})), term.coef * weight);
        }
      }
  }
  return f;
}

// ---------------------------------------------------------------- span

Eigen::VectorXd vectorize(const HermitianOperator& h) {
  const int n = h.dim();
  Eigen::VectorXd v(n * n);
  int k = 0;
  for (int i = 0; i < n; ++i) v(k++) = h(i, i).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      v(k++) = std::numbers::sqrt2 * h(i, j).real();
      v(k++) = std::numbers::sqrt2 * h(i, j).imag();
    }
  return v;
}

HermitianOperator unvectorize(const Eigen::VectorXd& v, int n) {
  if (v.size() != n * n) throw DimensionError("unvectorize: length must be n^2");
  Eigen::MatrixXcd m(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) m(i, i) = v(k++);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double re = v(k++) / std::numbers::sqrt2;
      const double im = v(k++) / std::numbers::sqrt2;
      m(i, j) = cplx(re, im);
      m(j, i) = cplx(re, -im);
    }
  return HermitianOperator(m);
}

HermitianOperator AffineSpan::point(const Eigen::VectorXd& coords) const {
  if (coords.size() != basis.cols()) throw DimensionError("span coordinates have the wrong length");
  return unvectorize(offset + basis * coords, n);
}

namespace {

// Adds the component of `d` orthogonal to the current basis when it exceeds tol.
bool extend_basis(Eigen::MatrixXd& basis, const Eigen::VectorXd& d, double tol) {
  Eigen::VectorXd r = d;
  for (int pass = 0; pass < 2; ++pass) {
    if (basis.cols() > 0) r -= basis * (basis.transpose() * r);
  }
  const double norm = r.norm();
  if (norm <= tol * std::max(1.0, d.norm())) return false;
  basis.conservativeResize(d.size(), basis.cols() + 1);
  basis.col(basis.cols() - 1) = r / norm;
  return true;
}

}  // namespace

AffineSpan affine_span(const std::vector<MomentMatrix>& samples, double tol) {
  if (samples.size() < 2) throw DomainError("affine_span needs at least two samples");
  AffineSpan s;
  s.n = samples.front().chi.dim();
  s.offset = vectorize(samples.front().chi);
  s.basis.resize(s.offset.size(), 0);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].chi.dim() != s.n) throw DimensionError("moment matrices differ in size");
    extend_basis(s.basis, vectorize(samples[i].chi) - s.offset, tol);
  }
  return s;
}

SampledSpan sample_affine_span(const MomentLevel& level, int d, Rng& rng, const SpanOptions& opts) {
  if (opts.stable_window < 1 || opts.budget < 2) throw DomainError("invalid span sampling options");
  SampledSpan out;
  AffineSpan& s = out.span;
  s.n = static_cast<int>(level.words.size());
  int stable = 0;
  int used = 0;
  const int batch = std::max(opts.stable_window, 8);
  while (true) {
    const int count = std::min(batch, opts.budget - used);
    if (count <= 0) {
      throw BudgetError("moment-matrix span rank still growing after " + std::to_string(used) + " samples");
    }
    std::vector<Rng> streams;
    for (int i = 0; i < count; ++i) streams.push_back(quantum::derive_stream(rng));
    std::vector<Eigen::VectorXd> vecs(count);
    parallel_for(count, opts.threads, [&](int i) {
      vecs[i] = vectorize(sample_moment_matrix(level, d, streams[i], opts.mode).chi);
    });
    for (int i = 0; i < count; ++i) {
      ++used;
      if (used == 1) {
        s.offset = vecs[i];
        s.basis.resize(s.offset.size(), 0);
        continue;
      }
      if (extend_basis(s.basis, vecs[i] - s.offset, opts.tol)) {
        stable = 0;
      } else if (++stable >= opts.stable_window) {
        out.samples = used;
        return out;
      }
    }
  }
}

// ---------------------------------------------------------------- solver

Eigen::MatrixXd embed_hermitian(const HermitianOperator& h) {
  const int n = h.dim();
  const Eigen::MatrixXd re = h.matrix().eigen().real();
  const Eigen::MatrixXd im = h.matrix().eigen().imag();
  Eigen::MatrixXd e(2 * n, 2 * n);
  e << re, -im, im, re;
  return e;
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::unbounded: return "unbounded";
    case SdpStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

namespace {

using Block = std::vector<Eigen::MatrixXd>;

double inner(const Block& a, const Block& b) {
  double v = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) v += (a[j].array() * b[j].array()).sum();
  return v;
}

double fro(const Block& a) { return std::sqrt(inner(a, a)); }

void axpy(Block& y, double a, const Block& x) {
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += a * x[j];
}

Block symmetrize(Block b) {
  for (auto& m : b) m = 0.5 * (m + m.transpose()).eval();
  return b;
}

// Largest step a with X + a dX >= 0 (infinity when unrestricted).
std::optional<double> max_step(const Block& x, const Block& dx) {
  double step = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < x.size(); ++j) {
    Eigen::LLT<Eigen::MatrixXd> llt(x[j]);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Eigen::MatrixXd linv_dx = llt.matrixL().solve(dx[j]);
    const Eigen::MatrixXd m = llt.matrixL().solve(linv_dx.transpose());
    const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .minCoeff();
    if (lmin < 0) step = std::min(step, -1.0 / lmin);
  }
  return step;
}

class InteriorPoint {
 public:
  InteriorPoint(const SdpProblem& p, const SdpOptions& o) : opts_(o) {
    m_ = p.num_vars();
    c_ = p.f0;  // C = F0
    for (int k = 0; k < m_; ++k) {
      if (p.f[k].size() != p.f0.size()) throw DimensionError("SDP constraint blocks are ragged");
      Block a;
      for (std::size_t j = 0; j < p.f0.size(); ++j) {
        if (p.f[k][j].rows() != p.f0[j].rows() || p.f[k][j].cols() != p.f0[j].cols()) {
          throw DimensionError("SDP block sizes differ between matrices");
        }
        a.push_back(-p.f[k][j]);
      }
      a_.push_back(std::move(a));
    }
    if (p.c.size() != m_) throw DimensionError("SDP objective length differs from variable count");
    b_ = -p.c;
    n_ = 0;
    for (const auto& blk : c_) n_ += static_cast<int>(blk.rows());
  }

  SdpResult run(double c0) {
    initial_point();
    SdpResult res;
    const double norm_b = b_.norm();
    const double norm_c = fro(c_);
    for (int it = 0; it <= opts_.max_iters; ++it) {
      const Eigen::VectorXd rp = b_ - apply_a(x_);
      Block rd = c_;
      axpy(rd, -1.0, z_);
      axpy_at(rd, -1.0, y_);
      const double pobj = inner(c_, x_);
      const double dobj = b_.dot(y_);
      const double xz = inner(x_, z_);
      res.iterations = it;
      res.y = y_;
      res.value = c0 - dobj;
      res.dual_value = c0 - pobj;
      res.gap = xz / (1.0 + std::abs(pobj) + std::abs(dobj));
      res.primal_residual = rp.norm() / (1.0 + norm_b);
      res.dual_residual = fro(rd) / (1.0 + norm_c);
      if (res.gap < opts_.gap_tol && res.primal_residual < opts_.feas_tol && res.dual_residual < opts_.feas_tol) {
        res.status = SdpStatus::optimal;
        return res;
      }
      if (pobj < 0 && apply_a(x_).norm() / -pobj < opts_.infeas_tol) {
        res.status = SdpStatus::infeasible;
        return res;
      }
      if (dobj > 0) {
        Block ray = z_;
        axpy_at(ray, 1.0, y_);
        if (fro(ray) / dobj < opts_.infeas_tol) {
          res.status = SdpStatus::unbounded;
          return res;
        }
      }
      if (it == opts_.max_iters) break;
      if (!step(rp, rd, xz / n_)) break;
    }
    res.status = SdpStatus::max_iterations;
    return res;
  }

 private:
  Eigen::VectorXd apply_a(const Block& x) const {
    Eigen::VectorXd v(m_);
    for (int k = 0; k < m_; ++k) v(k) = inner(a_[k], x);
    return v;
  }

  void axpy_at(Block& out, double s, const Eigen::VectorXd& y) const {
    for (int k = 0; k < m_; ++k) {
      if (y(k) != 0.0) axpy(out, s * y(k), a_[k]);
    }
  }

  void initial_point() {
    x_.clear();
    z_.clear();
    for (std::size_t j = 0; j < c_.size(); ++j) {
      const double nj = static_cast<double>(c_[j].rows());
      double xi = 0.0, eta = c_[j].norm();
      for (int k = 0; k < m_; ++k) {
        const double ak = a_[k][j].norm();
        xi = std::max(xi, nj * (1.0 + std::abs(b_(k))) / (1.0 + ak));
        eta = std::max(eta, ak);
      }
      eta = (1.0 + eta) / std::sqrt(nj);
      const double sx = std::max({10.0, std::sqrt(nj), xi});
      const double sz = std::max({10.0, std::sqrt(nj), eta});
      x_.push_back(sx * Eigen::MatrixXd::Identity(c_[j].rows(), c_[j].cols()));
      z_.push_back(sz * Eigen::MatrixXd::Identity(c_[j].rows(), c_[j].cols()));
    }
    y_ = Eigen::VectorXd::Zero(m_);
  }

  Block wmul(const Block& a) const {
    Block out;
    for (std::size_t j = 0; j < a.size(); ++j) out.push_back(w_[j] * a[j] * w_[j]);
    return out;
  }

  // Solves for (dX, dy, dZ) given the complementarity right-hand side rc.
  void direction(const Eigen::VectorXd& rp, const Block& rd, const Block& rc, Block& dx,
                 Eigen::VectorXd& dy, Block& dz) const {
    const Eigen::VectorXd rhs = rp - apply_a(rc) + apply_a(wmul(rd));
    dy = schur_.solve(rhs);
    dz = rd;
    axpy_at(dz, -1.0, dy);
    dx = rc;
    axpy(dx, -1.0, wmul(dz));
    dx = symmetrize(std::move(dx));
    dz = symmetrize(std::move(dz));
  }

  bool step(const Eigen::VectorXd& rp, const Block& rd, double mu) {
    // Nesterov-Todd scaling W with W Z W = X.
    w_.clear();
    Block zinv;
    for (std::size_t j = 0; j < x_.size(); ++j) {
      Eigen::LLT<Eigen::MatrixXd> lx(x_[j]), lz(z_[j]);
      if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
      const Eigen::MatrixXd l = lx.matrixL();
      const Eigen::MatrixXd r = lz.matrixL();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(r.transpose() * l, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Eigen::VectorXd sv = svd.singularValues();
      if (sv.minCoeff() <= 0) return false;
      const Eigen::MatrixXd g = l * svd.matrixV() * sv.cwiseInverse().cwiseSqrt().asDiagonal();
      w_.push_back(g * g.transpose());
      zinv.push_back(lz.solve(Eigen::MatrixXd::Identity(z_[j].rows(), z_[j].cols())));
    }

    Eigen::MatrixXd schur(m_, m_);
    std::vector<Block> waw(m_);
    for (int k = 0; k < m_; ++k) waw[k] = wmul(a_[k]);
    for (int k = 0; k < m_; ++k)
      for (int l = k; l < m_; ++l) schur(k, l) = schur(l, k) = inner(a_[k], waw[l]);
    schur_.compute(schur);
    if (schur_.info() != Eigen::Success) {
      const double shift = 1e-14 * std::max(1.0, schur.diagonal().maxCoeff());
      schur_.compute(schur + shift * Eigen::MatrixXd::Identity(m_, m_));
      if (schur_.info() != Eigen::Success) return false;
    }

    // Predictor.
    Block rc = x_;
    for (auto& m : rc) m = -m;
    Block dx, dz;
    Eigen::VectorXd dy;
    direction(rp, rd, rc, dx, dy, dz);
    const auto ap = max_step(x_, dx);
    const auto ad = max_step(z_, dz);
    if (!ap || !ad) return false;
    const double alpha_p = std::min(1.0, *ap), alpha_d = std::min(1.0, *ad);
    Block xa = x_, za = z_;
    axpy(xa, alpha_p, dx);
    axpy(za, alpha_d, dz);
    const double mu_aff = inner(xa, za) / n_;
    const double expon = std::max(1.0, 3.0 * std::pow(std::min(alpha_p, alpha_d), 2));
    const double sigma = std::clamp(std::pow(mu_aff / mu, expon), 0.0, 1.0);

    // Corrector.
    rc.clear();
    for (std::size_t j = 0; j < x_.size(); ++j) {
      const Eigen::MatrixXd second = dx[j] * dz[j] * zinv[j];
      rc.push_back(sigma * mu * zinv[j] - x_[j] - 0.5 * (second + second.transpose()));
    }
    direction(rp, rd, rc, dx, dy, dz);
    const auto cp = max_step(x_, dx);
    const auto cd = max_step(z_, dz);
    if (!cp || !cd) return false;
    const double gamma = std::min(opts_.step_fraction, 0.9 + 0.09 * std::min(alpha_p, alpha_d));
    const double step_p = std::min(1.0, gamma * *cp);
    const double step_d = std::min(1.0, gamma * *cd);
    axpy(x_, step_p, dx);
    axpy(z_, step_d, dz);
    y_ += step_d * dy;
    x_ = symmetrize(std::move(x_));
    z_ = symmetrize(std::move(z_));
    return true;
  }

  SdpOptions opts_;
  int m_ = 0;
  int n_ = 0;
  Block c_;
  std::vector<Block> a_;
  Eigen::VectorXd b_;
  Block x_, z_, w_;
  Eigen::VectorXd y_;
  Eigen::LLT<Eigen::MatrixXd> schur_;
};

}  // namespace

SdpResult sdp_solve(const SdpProblem& problem, const SdpOptions& opts) {
  if (problem.f0.empty()) throw DimensionError("SDP needs at least one block");
  if (problem.num_vars() == 0) {
    SdpResult r;
    bool psd = true;
    for (const auto& blk : problem.f0) {
      const Eigen::MatrixXd sym = 0.5 * (blk + blk.transpose());
      if (Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() < -opts.feas_tol) psd = false;
    }
    r.status = psd ? SdpStatus::optimal : SdpStatus::infeasible;
    r.value = r.dual_value = problem.c0;
    return r;
  }
  InteriorPoint ip(problem, opts);
  return ip.run(problem.c0);
}

// ---------------------------------------------------------------- bound

std::vector<State> swap_frame_ideal_states(const Witness& w) {
  if (!w.binary() || w.num_measurements() != 2) {
    throw DimensionError("swap frame needs two binary measurements");
  }
  const std::vector<quantum::Povm> povms{
      quantum::Povm::from_observable(quantum::Observable(HermitianOperator(linalg::pauli_z()))),
      quantum::Povm::from_observable(quantum::Observable(HermitianOperator(linalg::pauli_x())))};
  std::vector<State> out;
  for (int x = 0; x < w.num_preparations(); ++x) {
    ComplexMatrix g = ComplexMatrix::zero(2);
    for (int y = 0; y < 2; ++y)
      for (int b = 0; b < 2; ++b) g += w.alpha(x, y, b) * povms[y].effect(b).matrix();
    out.push_back(State::from_ket(linalg::eig_hermitian(HermitianOperator(g)).vector(0)));
  }
  return out;
}

std::vector<State> align_to_swap_frame(const Witness& w, std::span<const State> ideal_states) {
  const auto target = swap_frame_ideal_states(w);
  if (ideal_states.size() != target.size()) throw DimensionError("one ideal state per preparation required");
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  std::vector<Eigen::Vector3d> src;
  for (std::size_t x = 0; x < target.size(); ++x) {
    if (ideal_states[x].dim() != 2) throw DimensionError("swap references must be qubit states");
    const auto a = quantum::state_to_bloch(ideal_states[x]);
    const auto b = quantum::state_to_bloch(target[x]);
    src.emplace_back(a[0], a[1], a[2]);
    h += Eigen::Vector3d(b[0], b[1], b[2]) * src.back().transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector3d sign(1.0, 1.0, (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0 : 1.0);
  const Eigen::Matrix3d rot = svd.matrixU() * sign.asDiagonal() * svd.matrixV().transpose();
  std::vector<State> out;
  for (const auto& v : src) {
    const Eigen::Vector3d m = rot * v;
    out.push_back(quantum::bloch_to_state({m(0), m(1), m(2)}));
  }
  return out;
}

MomentLevel default_level(const Witness& w) {
  return w.num_preparations() == 4 ? product_level(4) : compact_level(w.num_preparations());
}

SwapProblem build_swap_problem(const Witness& w, std::span<const State> ideal_states, int d, Rng& rng,
                               const SpanOptions& opts) {
  SwapProblem p;
  p.level = default_level(w);
  p.objective = swap_fidelity_functional(p.level, align_to_swap_frame(w, ideal_states));
  p.witness = witness_functional(p.level, w);
  auto sampled = sample_affine_span(p.level, d, rng, opts);
  p.span = std::move(sampled.span);
  p.samples = sampled.samples;
  return p;
}

SdpProblem swap_sdp(const SwapProblem& p, double a_star) {
  const AffineSpan& s = p.span;
  const HermitianOperator chi0 = unvectorize(s.offset, s.n);
  SdpProblem sdp;
  Eigen::MatrixXd lin0(1, 1);
  lin0(0, 0) = p.witness.evaluate(chi0) - a_star;
  sdp.f0 = {embed_hermitian(chi0), lin0};
  sdp.c0 = p.objective.evaluate(chi0);
  sdp.c.resize(s.rank());
  for (int k = 0; k < s.rank(); ++k) {
    const HermitianOperator e = unvectorize(s.basis.col(k), s.n);
    Eigen::MatrixXd lin(1, 1);
    lin(0, 0) = p.witness.evaluate(e);
    sdp.f.push_back({embed_hermitian(e), lin});
    sdp.c(k) = p.objective.evaluate(e);
  }
  return sdp;
}

SwapBoundResult solve_swap(const SwapProblem& p, double a_star, const SdpOptions& opts) {
  const auto res = sdp_solve(swap_sdp(p, a_star), opts);
  SwapBoundResult out;
  out.a_star = a_star;
  out.bound = res.status == SdpStatus::infeasible ? std::numeric_limits<double>::quiet_NaN() : res.value;
  out.gap = res.gap;
  out.rank = p.span.rank();
  out.samples = p.samples;
  out.status = res.status;
  out.iterations = res.iterations;
  return out;
}

SwapBoundResult swap_fidelity_bound(const Witness& w, std::span<const State> ideal_states, double a_star,
                                    int d, Rng& rng, const SpanOptions& span_opts,
                                    const SdpOptions& sdp_opts) {
  const auto p = build_swap_problem(w, ideal_states, d, rng, span_opts);
  return solve_swap(p, a_star, sdp_opts);
}

}  // namespace sdi::sdp
