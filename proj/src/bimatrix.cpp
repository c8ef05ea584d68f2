// Copyright 2026 The rsgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bimatrix.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "error.hpp"
#include "linalg.hpp"

namespace rsgame {
namespace {

std::vector<std::vector<int>> Subsets(int n, int max_size) {
  std::vector<std::vector<int>> out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) s.push_back(i);
    }
    if (static_cast<int>(s.size()) <= max_size) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Weights w on `own` (summing to one) that make the opponent indifferent
// across `other`: sum_{i in own} w_i M(i, j) equal for all j in other.
// M is oriented so that rows are indexed by the owner of w.
std::optional<Eigen::VectorXd> Indifference(const Eigen::MatrixXd& m,
                                            const std::vector<int>& own,
                                            const std::vector<int>& other,
                                            int* skipped) {
  const int s = static_cast<int>(own.size());
  const int t = static_cast<int>(other.size());
  // Unknowns: w (s entries) and the common value c.
  Eigen::MatrixXd sys(t + 1, s + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(t + 1);
  for (int r = 0; r < t; ++r) {
    for (int c = 0; c < s; ++c) sys(r, c) = m(own[c], other[r]);
    sys(r, s) = -1.0;
  }
  sys.row(t).head(s).setOnes();
  sys(t, s) = 0.0;
  rhs(t) = 1.0;
  Eigen::VectorXd sol;
  if (s == t) {
    try {
      sol = linalg::Solve(sys, rhs);
    } catch (const Error&) {
      ++*skipped;
      return std::nullopt;
    }
  } else {
    sol = sys.completeOrthogonalDecomposition().solve(rhs);
    const double res = (sys * sol - rhs).cwiseAbs().maxCoeff();
    if (!(res <= 1e-10 * std::max(1.0, sys.cwiseAbs().maxCoeff()))) {
      return std::nullopt;
    }
  }
  if (!sol.allFinite()) {
    ++*skipped;
    return std::nullopt;
  }
  return sol.head(s);
}

std::optional<MixedAction> ToMixed(const Eigen::VectorXd& w,
                                   const std::vector<int>& support, int n,
                                   double tol) {
  MixedAction m;
  m.weights.assign(n, 0.0);
  for (int i = 0; i < static_cast<int>(support.size()); ++i) {
    if (w(i) < -tol) return std::nullopt;
    m.weights[support[i]] = std::max(0.0, w(i));
  }
  double sum = 0.0;
  for (double x : m.weights) sum += x;
  if (!(sum > 0.0)) return std::nullopt;
  for (double& x : m.weights) x /= sum;
  return m;
}

Eigen::VectorXd AsVector(const MixedAction& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.weights.data(),
                                           static_cast<int>(m.size()));
}

bool SameEquilibrium(const BimatrixEquilibrium& e, const MixedAction& x,
                     const MixedAction& y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(e.row[i] - x[i]) > 1e-9) return false;
  }
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (std::abs(e.col[j] - y[j]) > 1e-9) return false;
  }
  return true;
}

}  // namespace

double BimatrixRegret(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      const MixedAction& x, const MixedAction& y) {
  const Eigen::VectorXd xv = AsVector(x), yv = AsVector(y);
  const double scale =
      std::max({a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(), 1e-300});
  const Eigen::VectorXd ay = a * yv;
  const Eigen::VectorXd xb = b.transpose() * xv;
  const double row_regret = xv.dot(ay) - ay.minCoeff();
  const double col_regret = yv.dot(xb) - xb.minCoeff();
  return std::max(row_regret, col_regret) / scale;
}

BimatrixResult SolveBimatrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const BimatrixOptions& options) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (m == 0 || n == 0 || b.rows() != m || b.cols() != n) {
    Fail(ErrorCode::kInvalidArgument, "bimatrix game shape mismatch");
  }
  if (!a.allFinite() || !b.allFinite()) {
    Fail(ErrorCode::kInvalidArgument, "bimatrix game has non-finite entries");
  }
  BimatrixResult out;
  const auto rows = Subsets(m, std::min(m, options.support_cap));
  const auto cols = Subsets(n, std::min(n, options.support_cap));

  auto try_pair = [&](const std::vector<int>& rs, const std::vector<int>& cs) {
    // Column weights y make the row player indifferent over rs; row weights
    // x make the column player indifferent over cs.
    const auto yw = Indifference(a.transpose(), cs, rs, &out.skipped_supports);
    if (!yw) return;
    const auto xw = Indifference(b, rs, cs, &out.skipped_supports);
    if (!xw) return;
    const auto y = ToMixed(*yw, cs, n, options.tol);
    const auto x = ToMixed(*xw, rs, m, options.tol);
    if (!x || !y) return;
    if (BimatrixRegret(a, b, *x, *y) > options.tol) return;
    for (const auto& e : out.equilibria) {
      if (SameEquilibrium(e, *x, *y)) return;
    }
    BimatrixEquilibrium e;
    e.row = *x;
    e.col = *y;
    e.row_support = x->Support();
    e.col_support = y->Support();
    e.row_value = AsVector(*x).dot(a * AsVector(*y));
    e.col_value = AsVector(*x).dot(b * AsVector(*y));
    out.equilibria.push_back(std::move(e));
  };

  for (const auto& rs : rows) {
    for (const auto& cs : cols) {
      if (rs.size() == cs.size()) try_pair(rs, cs);
    }
  }
  if (out.equilibria.empty()) {
    for (const auto& rs : rows) {
      for (const auto& cs : cols) {
        if (rs.size() != cs.size()) try_pair(rs, cs);
      }
    }
  }
  if (out.equilibria.empty()) {
    Fail(ErrorCode::kNumerical,
         "support enumeration found no equilibrium within tolerance");
  }
  std::sort(out.equilibria.begin(), out.equilibria.end(),
            [](const BimatrixEquilibrium& l, const BimatrixEquilibrium& r) {
              if (l.row_support != r.row_support) {
                return l.row_support < r.row_support;
              }
              if (l.col_support != r.col_support) {
                return l.col_support < r.col_support;
              }
              if (l.row.weights != r.row.weights) {
                return l.row.weights < r.row.weights;
              }
              return l.col.weights < r.col.weights;
            });
  return out;
}

}  // namespace rsgame
