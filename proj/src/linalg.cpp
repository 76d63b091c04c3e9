#include "sandwich/linalg.hpp"

#include "sandwich/error.hpp"

namespace sandwich {

Int determinant(IntMat m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (m[i][k] != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        check_invariant(num % prev == 0, "Bareiss division is not exact");
        m[i][j] = num / prev;
      }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

IntVec leading_principal_minors(const IntMat& m) {
  IntVec out;
  for (std::size_t k = 1; k <= m.size(); ++k) {
    IntMat block(k, IntVec(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) block[i][j] = m[i][j];
    out.push_back(determinant(std::move(block)));
  }
  return out;
}

std::optional<RatVec> solve_exact(const std::vector<RatVec>& m, const RatVec& rhs) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  require(rhs.size() == m.size(), "rhs length mismatch");

  std::vector<RatVec> a(m);
  RatVec b(rhs);
  std::vector<int> pivot_row(cols, -1);
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[r], a[p]);
    std::swap(b[r], b[p]);
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat f = a[i][c] / a[r][c];
      for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivot_row[c] = r;
    ++r;
  }
  check_invariant(r == cols, "solve_exact expects linearly independent columns");
  for (int i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;  // inconsistent system

  RatVec x(cols, Rat(0));
  for (int c = 0; c < cols; ++c) x[c] = b[pivot_row[c]] / a[pivot_row[c]][c];
  return x;
}

std::vector<RatVec> to_rational(const IntMat& m) {
  std::vector<RatVec> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i].assign(m[i].begin(), m[i].end());
  return out;
}

}  // namespace sandwich
