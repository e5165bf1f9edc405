#pragma once

// Translation-invariant states given by a finite Kraus family (v_1..v_d on a
// k-dimensional bond space) and a faithful invariant density matrix rho.
//
// A matrix unit |e_I><e_J| on a window of m consecutive sites evaluates to
//   tr(rho v_{i1} ... v_{im} v_{jm}^* ... v_{j1}^*),
// the first site of the window being the most significant tensor factor.
//
// GNS conventions used throughout: the GNS space of (M_k, tr(rho .)) is M_k
// with the Hilbert-Schmidt inner product, a in M_k is embedded as a rho^{1/2},
// and the cyclic vector is rho^{1/2}. Vectors are column-major vec(X).

#include <optional>
#include <span>
#include <utility>

#include "fcs/linalg.hpp"

namespace fcs {

using MultiIndex = std::vector<int>;  // 0-based physical labels

struct KrausFamily {
  int d = 0;
  int k = 0;
  std::vector<Mat> v;

  KrausFamily() = default;
  explicit KrausFamily(std::vector<Mat> ops) : v(std::move(ops)) {
    d = static_cast<int>(v.size());
    k = d > 0 ? static_cast<int>(v.front().rows()) : 0;
  }
};

struct ValidationReport {
  double defect = 0.0;  // |sum_i v_i v_i^* - I|_max
  double tol = 0.0;
  bool pass = false;
};

inline void check_shapes(const KrausFamily& kraus) {
  if (kraus.d < 1 || static_cast<int>(kraus.v.size()) != kraus.d)
    throw InvalidArgument("Kraus family needs d >= 1 operators");
  if (kraus.k < 1) throw InvalidArgument("bond dimension must be positive");
  for (std::size_t i = 0; i < kraus.v.size(); ++i) {
    if (kraus.v[i].rows() != kraus.k || kraus.v[i].cols() != kraus.k)
      throw InvalidArgument("Kraus operator " + std::to_string(i + 1) + " is " +
                            std::to_string(kraus.v[i].rows()) + "x" +
                            std::to_string(kraus.v[i].cols()) + ", expected " +
                            std::to_string(kraus.k) + "x" + std::to_string(kraus.k));
  }
}

inline ValidationReport validate(const KrausFamily& kraus, double tol = 1e-10) {
  check_shapes(kraus);
  Mat sum = Mat::Zero(kraus.k, kraus.k);
  for (const auto& vi : kraus.v) sum += vi * vi.adjoint();
  ValidationReport r;
  r.tol = tol;
  r.defect = max_abs(sum - Mat::Identity(kraus.k, kraus.k));
  r.pass = r.defect <= tol;
  return r;
}

/// Superoperator of tau(x) = sum_i v_i x v_i^* acting on vec(x).
inline Mat tau_matrix(const KrausFamily& kraus) {
  const int k = kraus.k;
  Mat t = Mat::Zero(k * k, k * k);
  for (const auto& vi : kraus.v) t += kron(vi.conjugate(), vi);
  return t;
}

/// Dual map x -> sum_i v_i^* x v_i; its fixed points are invariant densities.
inline Mat dual_tau_matrix(const KrausFamily& kraus) { return tau_matrix(kraus).adjoint(); }

struct FcsState {
  KrausFamily kraus;
  Mat rho;
  bool ergodic = true;
  int fixed_multiplicity = 1;

  int d() const { return kraus.d; }
  int k() const { return kraus.k; }
};

struct SortedEig {
  Vec values;
  Mat vectors;
};

/// Orders eigenpairs by modulus descending, ties by real then imaginary part
/// descending.
inline SortedEig sorted_eig(const Mat& m) {
  Eigen::ComplexEigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success) throw Error("eigensolver failed");
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  const Vec& ev = es.eigenvalues();
  constexpr double kTie = 1e-12;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = std::abs(ev(a)), mb = std::abs(ev(b));
    if (std::abs(ma - mb) > kTie) return ma > mb;
    if (std::abs(ev(a).real() - ev(b).real()) > kTie) return ev(a).real() > ev(b).real();
    return ev(a).imag() > ev(b).imag();
  });
  SortedEig out{Vec(n), Mat(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = ev(order[i]);
    out.vectors.col(i) = es.eigenvectors().col(order[i]);
  }
  return out;
}

inline constexpr double kEigenvalueOneTol = 1e-8;

/// Hermitian, unit-trace projection with eigenvalues below tol clipped to 0.
inline Mat clean_density(const Mat& raw, double tol) {
  Mat h = hermitian_part(raw);
  const cplx tr = h.trace();
  if (std::abs(tr) < 1e-300) throw Error("fixed point has zero trace");
  h /= tr.real();
  auto eig = hermitian_eig(h);
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) < tol) eig.values(i) = std::max(eig.values(i), 0.0);
  Mat out = eig.vectors * eig.values.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
  return hermitian_part(out / out.trace().real());
}

/// Invariant density of the dual transfer map. With several fixed points the
/// Cesaro projection of I/k is returned and ergodic is false.
inline FcsState fixed_point(const KrausFamily& kraus, double tol = 1e-10) {
  const auto report = validate(kraus, std::max(tol, 1e-8));
  if (!report.pass)
    throw InvalidArgument("Kraus family is not unital: defect " +
                          std::to_string(report.defect));
  const int k = kraus.k;
  const Mat dual = dual_tau_matrix(kraus);

  auto unit_block = [](const SortedEig& e) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < e.values.size(); ++i)
      if (std::abs(e.values(i) - 1.0) < kEigenvalueOneTol) idx.push_back(i);
    return idx;
  };
  const SortedEig right = sorted_eig(dual);
  const SortedEig left = sorted_eig(dual.adjoint());
  const auto ri = unit_block(right);
  const auto li = unit_block(left);
  if (ri.empty() || ri.size() != li.size())
    throw Error("could not isolate the eigenvalue-1 subspace of the transfer map");

  Mat v(k * k, ri.size()), u(k * k, li.size());
  for (std::size_t c = 0; c < ri.size(); ++c) {
    v.col(c) = right.vectors.col(ri[c]);
    u.col(c) = left.vectors.col(li[c]);
  }
  const Mat proj = v * (u.adjoint() * v).inverse() * u.adjoint();
  const Vec start = vec(Mat::Identity(k, k) / static_cast<double>(k));
  Mat rho = unvec(proj * start, k, k);

  FcsState st;
  st.kraus = kraus;
  st.fixed_multiplicity = static_cast<int>(ri.size());
  st.ergodic = st.fixed_multiplicity == 1;
  st.rho = clean_density(rho, tol);
  const double min_eig = hermitian_eig(st.rho).values(0);
  if (min_eig < tol)
    throw NotFaithful("invariant state is not faithful (smallest eigenvalue " +
                      std::to_string(min_eig) + ")");
  return st;
}

/// State from explicit (kraus, rho), checking invariance and faithfulness.
inline FcsState make_state(const KrausFamily& kraus, const Mat& rho, double tol = 1e-9) {
  const auto report = validate(kraus, tol);
  if (!report.pass) throw InvalidArgument("Kraus family is not unital");
  if (rho.rows() != kraus.k || rho.cols() != kraus.k)
    throw InvalidArgument("rho has the wrong dimension");
  Mat dual = Mat::Zero(kraus.k, kraus.k);
  for (const auto& vi : kraus.v) dual += vi.adjoint() * rho * vi;
  if (max_abs(dual - rho) > tol) throw InvalidArgument("rho is not invariant");
  if (max_abs(rho - rho.adjoint()) > tol || std::abs(rho.trace() - 1.0) > tol)
    throw InvalidArgument("rho is not a density matrix");
  if (hermitian_eig(rho).values(0) < tol) throw NotFaithful("rho is not faithful");
  FcsState st;
  st.kraus = kraus;
  st.rho = hermitian_part(rho);
  const SortedEig e = sorted_eig(tau_matrix(kraus));
  st.fixed_multiplicity = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (std::abs(e.values(i) - 1.0) < kEigenvalueOneTol) ++st.fixed_multiplicity;
  st.ergodic = st.fixed_multiplicity == 1;
  return st;
}

/// v_I = v_{i1} ... v_{im}; empty index gives the identity.
inline Mat kraus_word(const KrausFamily& kraus, std::span<const int> idx) {
  Mat out = Mat::Identity(kraus.k, kraus.k);
  for (int i : idx) {
    if (i < 0 || i >= kraus.d)
      throw InvalidArgument("physical index " + std::to_string(i + 1) +
                            " out of range 1.." + std::to_string(kraus.d));
    out = out * kraus.v[i];
  }
  return out;
}

struct MonomialValue {
  cplx value;
  bool gauge_invariant = true;  // |I| == |J|: an honest value of the chain state
};

/// tr(rho v_I v_J^*).
inline MonomialValue evaluate_monomial(const FcsState& state, const MultiIndex& I,
                                       const MultiIndex& J) {
  const Mat vi = kraus_word(state.kraus, I);
  const Mat vj = kraus_word(state.kraus, J);
  return {(state.rho * vi * vj.adjoint()).trace(), I.size() == J.size()};
}

/// Observable supported on the sites first..last; the tensor is expressed in
/// the product basis of that window.
struct LocalObservable {
  int first = 0;
  int last = 0;
  Mat tensor;

  int length() const { return last - first + 1; }

  static LocalObservable product(int first, const std::vector<Mat>& factors) {
    if (factors.empty()) throw InvalidArgument("empty product observable");
    Mat t = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) t = kron(t, factors[i]);
    return {first, first + static_cast<int>(factors.size()) - 1, t};
  }
};

inline constexpr int kDefaultMaxWindow = 12;

/// Reduced density matrix on m consecutive sites: omega(Q) = tr(rho_m Q).
inline Mat reduced_density(const FcsState& state, int m, int max_window = kDefaultMaxWindow) {
  if (m < 0) throw InvalidArgument("negative window");
  if (m > max_window)
    throw ResourceLimit("window of " + std::to_string(m) + " sites exceeds the maximum " +
                        std::to_string(max_window));
  const int d = state.d();
  const std::int64_t dim =
      checked_pow(d, m, std::int64_t{1} << 26, "reduced density dimension");
  Mat out(dim, dim);
  if (m == 0) {
    out(0, 0) = state.rho.trace();
    return out;
  }
  const auto& v = state.kraus.v;
  std::vector<Mat> vadj(d);
  for (int i = 0; i < d; ++i) vadj[i] = v[i].adjoint();

  // y = v_J^* rho v_I for the prefixes I, J; omega(|I><J|) = tr(y).
  std::vector<Mat> stack(m + 1);
  stack[0] = state.rho;
  auto recurse = [&](auto&& self, int depth, std::int64_t I, std::int64_t J) -> void {
    const Mat& y = stack[depth];
    if (depth + 1 == m) {
      for (int i = 0; i < d; ++i) {
        const Mat yi = y * v[i];
        for (int j = 0; j < d; ++j) {
          // tr(v_j^* y v_i)
          const cplx val = (vadj[j] * yi).trace();
          out((J * d + j), (I * d + i)) = val;
        }
      }
      return;
    }
    for (int i = 0; i < d; ++i) {
      const Mat yi = y * v[i];
      for (int j = 0; j < d; ++j) {
        stack[depth + 1] = vadj[j] * yi;
        self(self, depth + 1, I * d + i, J * d + j);
      }
    }
  };
  recurse(recurse, 0, 0, 0);
  return out;
}

/// Translation-invariant value of a local observable.
inline cplx evaluate_local(const FcsState& state, const LocalObservable& obs,
                           int max_window = kDefaultMaxWindow) {
  const int m = obs.length();
  if (m < 1) throw InvalidArgument("observable support is empty");
  if (m > max_window)
    throw ResourceLimit("window of " + std::to_string(m) + " sites exceeds the maximum " +
                        std::to_string(max_window));
  const std::int64_t dim = checked_pow(state.d(), m, std::int64_t{1} << 26, "window");
  if (obs.tensor.rows() != dim || obs.tensor.cols() != dim)
    throw InvalidArgument("observable tensor does not match its support");
  const Mat rho_m = reduced_density(state, m, max_window);
  return (rho_m.transpose().cwiseProduct(obs.tensor)).sum();
}

/// v_i -> U v_i U^*, rho -> U rho U^*; leaves every chain expectation unchanged.
inline FcsState gauge_transform(const FcsState& state, const Mat& u) {
  FcsState out = state;
  for (auto& vi : out.kraus.v) vi = u * vi * u.adjoint();
  out.rho = u * state.rho * u.adjoint();
  return out;
}

// ---------------------------------------------------------------------------
// Modular data of the faithful state tr(rho .) on M_k.

/// The modular conjugation acts as J xi = swap * conj(xi) on vec-coordinates,
/// i.e. X -> X^* on the GNS space.
struct ModularConjugation {
  int k = 0;
  Mat swap;  // unitary part of the antilinear map

  Vec apply(const Vec& xi) const { return swap * xi.conjugate(); }
  Mat apply(const Mat& x) const { return x.adjoint(); }
};

struct ModularData {
  int gns_dim = 0;
  Mat rho;
  Mat rho_sqrt;
  Mat rho_inv_sqrt;
  Mat delta;  // X -> rho X rho^{-1}
  ModularConjugation jconj;
  std::vector<Mat> vtilde;
  double delta_identity_defect = 0.0;  // |Delta - I|_max

  Vec cyclic() const { return vec(rho_sqrt); }
  bool delta_trivial(double tol) const { return delta_identity_defect <= tol; }
};

inline constexpr double kFaithfulTol = 1e-12;

inline ModularData modular_data(const FcsState& state) {
  const int k = state.k();
  auto eig = hermitian_eig(state.rho);
  if (eig.values(0) <= kFaithfulTol)
    throw NotFaithful("modular data needs a faithful invariant state");
  ModularData md;
  md.gns_dim = k * k;
  md.rho = state.rho;
  md.rho_sqrt = psd_power(state.rho, 0.5);
  md.rho_inv_sqrt = psd_power(state.rho, -0.5);
  const Mat rho_inv = psd_power(state.rho, -1.0);
  md.delta = kron(rho_inv.transpose(), state.rho);
  md.delta_identity_defect = max_abs(md.delta - Mat::Identity(k * k, k * k));
  md.jconj.k = k;
  md.jconj.swap = Mat::Zero(k * k, k * k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) md.jconj.swap(b + a * k, a + b * k) = 1.0;
  // J sigma_{i/2}(v^*) J is right multiplication by rho^{1/2} v rho^{-1/2};
  // transposing in the fixed basis turns it into a left action on K.
  for (const auto& vi : state.kraus.v)
    md.vtilde.push_back((md.rho_sqrt * vi * md.rho_inv_sqrt).transpose());
  return md;
}

inline KrausFamily dual_family(const ModularData& md) { return KrausFamily(md.vtilde); }

/// The dual family with its invariant state rho^T; monomials of this state on
/// reversed indices reproduce those of the original.
inline FcsState dual_state(const ModularData& md) {
  FcsState st;
  st.kraus = dual_family(md);
  st.rho = md.rho.transpose();
  return st;
}

}  // namespace fcs
