#pragma once

// Test-only dense eigenvalue oracle: Hessenberg reduction + shifted QR with
// Givens rotations, in complex arithmetic. Independent of the library's
// closed-form root paths; used to cross-check Cardano roots (via companion
// matrices) and Hamilton-matrix spectra.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace trihyp_test {

using cplx = std::complex<double>;
using CMat = std::vector<std::vector<cplx>>;

inline CMat cmat(int n) { return CMat(n, std::vector<cplx>(n, cplx(0.0))); }

inline void hessenberg(CMat& a) {
  int n = (int)a.size();
  for (int k = 0; k + 2 < n; ++k) {
    // Householder vector for column k below the subdiagonal.
    double norm = 0.0;
    for (int i = k + 1; i < n; ++i) norm += std::norm(a[i][k]);
    norm = std::sqrt(norm);
    if (norm < 1e-300) continue;
    cplx alpha = a[k + 1][k];
    double aa = std::abs(alpha);
    cplx phase = (aa > 0) ? alpha / aa : cplx(1.0);
    cplx v1 = alpha + phase * norm;
    std::vector<cplx> v(n, cplx(0.0));
    v[k + 1] = v1;
    for (int i = k + 2; i < n; ++i) v[i] = a[i][k];
    double vnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
    if (vnorm2 < 1e-300) continue;
    // A <- (I - 2 v v*/|v|^2) A (I - 2 v v*/|v|^2)
    for (int j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (int i = k + 1; i < n; ++i) s += std::conj(v[i]) * a[i][j];
      s *= 2.0 / vnorm2;
      for (int i = k + 1; i < n; ++i) a[i][j] -= s * v[i];
    }
    for (int i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (int j = k + 1; j < n; ++j) s += a[i][j] * v[j];
      s *= 2.0 / vnorm2;
      for (int j = k + 1; j < n; ++j) a[i][j] -= s * std::conj(v[j]);
    }
  }
}

inline std::vector<cplx> eigenvalues(CMat a, int max_iter = 500) {
  int n = (int)a.size();
  hessenberg(a);
  std::vector<cplx> eig;
  int m = n;
  int iter = 0;
  while (m > 0) {
    if (m == 1) {
      eig.push_back(a[0][0]);
      --m;
      break;
    }
    // Deflation check.
    int l = m - 1;
    while (l > 0) {
      double s = std::abs(a[l - 1][l - 1]) + std::abs(a[l][l]);
      if (s == 0.0) s = 1.0;
      if (std::abs(a[l][l - 1]) < 1e-15 * s) break;
      --l;
    }
    if (l == m - 1) {
      eig.push_back(a[m - 1][m - 1]);
      --m;
      iter = 0;
      continue;
    }
    if (++iter > max_iter) {
      for (int i = 0; i < m; ++i) eig.push_back(a[i][i]);
      break;
    }
    // Wilkinson shift from the trailing 2x2 of the active block.
    cplx h11 = a[m - 2][m - 2], h12 = a[m - 2][m - 1];
    cplx h21 = a[m - 1][m - 2], h22 = a[m - 1][m - 1];
    cplx tr = h11 + h22, det = h11 * h22 - h12 * h21;
    cplx disc = std::sqrt(tr * tr - 4.0 * det);
    cplx mu1 = (tr + disc) / 2.0, mu2 = (tr - disc) / 2.0;
    cplx mu = (std::abs(mu1 - h22) < std::abs(mu2 - h22)) ? mu1 : mu2;
    if (iter % 17 == 0) mu += cplx(0.0, 1e-3 * (1.0 + std::abs(mu)));  // stagnation kick

    // Explicit shifted QR step: H - mu I = QR (Givens), H <- RQ + mu I.
    for (int i = 0; i < m; ++i) a[i][i] -= mu;
    std::vector<std::array<cplx, 2>> rot(m, {cplx(1.0), cplx(0.0)});
    for (int k = 0; k < m - 1; ++k) {
      cplx xg = a[k][k], yg = a[k + 1][k];
      double r = std::sqrt(std::norm(xg) + std::norm(yg));
      cplx c(1.0), s(0.0);
      if (r > 1e-300) {
        c = xg / r;
        s = yg / r;
      }
      rot[k] = {c, s};
      for (int j = k; j < m; ++j) {
        cplx t1 = a[k][j], t2 = a[k + 1][j];
        a[k][j] = std::conj(c) * t1 + std::conj(s) * t2;
        a[k + 1][j] = -s * t1 + c * t2;
      }
      a[k + 1][k] = 0.0;
    }
    for (int k = 0; k < m - 1; ++k) {
      cplx c = rot[k][0], s = rot[k][1];
      for (int i = 0; i < m; ++i) {
        cplx t1 = a[i][k], t2 = a[i][k + 1];
        a[i][k] = t1 * c + t2 * s;
        a[i][k + 1] = -t1 * std::conj(s) + t2 * std::conj(c);
      }
    }
    for (int i = 0; i < m; ++i) a[i][i] += mu;
  }
  return eig;
}

/// Eigenvalues of the companion matrix of tau^3 + a tau^2 + b tau + c.
inline std::array<cplx, 3> companion_cubic_eigs(double a, double b, double c) {
  CMat m = cmat(3);
  m[0][2] = -c;
  m[1][2] = -b;
  m[2][2] = -a;
  m[1][0] = 1.0;
  m[2][1] = 1.0;
  auto e = eigenvalues(m);
  return {e[0], e[1], e[2]};
}

/// Distance between two multisets of complex numbers (greedy matching).
template <typename ItA, typename ItB>
double multiset_distance(ItA a_begin, ItA a_end, ItB b_begin, ItB b_end) {
  std::vector<cplx> a(a_begin, a_end), b(b_begin, b_end);
  double worst = 0.0;
  for (const cplx& x : a) {
    double best = 1e300;
    size_t bi = 0;
    for (size_t i = 0; i < b.size(); ++i) {
      double d = std::abs(x - b[i]);
      if (d < best) {
        best = d;
        bi = i;
      }
    }
    worst = std::max(worst, best);
    if (!b.empty()) b.erase(b.begin() + bi);
  }
  return worst;
}

}  // namespace trihyp_test
