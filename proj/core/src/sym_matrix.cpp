#include "hessval/sym_matrix.hpp"

#include "hessval/constants.hpp"
#include "hessval/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace hessval {

double elementary_symmetric(const Mat& A, int k) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n) throw DimensionMismatch("elementary_symmetric: square matrix required");
    if (k < 0 || k > n) throw IndexOutOfRange("elementary_symmetric: need 0 <= k <= n");
    double scale = A.cwiseAbs().maxCoeff();
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (scale + 1.0))
        throw Error("elementary_symmetric: matrix is not symmetric");
    if (k == 0) return 1.0;
    if (k == 1) return A.trace();

    // Sum over all k-subsets of the index set.
    std::vector<int> sel(k);
    for (int i = 0; i < k; ++i) sel[i] = i;
    double total = 0.0;
    while (true) {
        Mat minor(k, k);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) minor(r, c) = A(sel[r], sel[c]);
        total += minor.determinant();

        int i = k - 1;
        while (i >= 0 && sel[i] == n - k + i) --i;
        if (i < 0) break;
        ++sel[i];
        for (int j = i + 1; j < k; ++j) sel[j] = sel[j - 1] + 1;
    }
    return total;
}

double elementary_symmetric_radial(int n, int k, double lam_tangent, double lam_radial) {
    if (k < 0 || k > n) throw IndexOutOfRange("elementary_symmetric_radial");
    // e_k of (t, ..., t, r) with n-1 copies of t:
    // C(n-1, k) t^k + C(n-1, k-1) t^{k-1} r
    double a = binomial(n - 1, k) * std::pow(lam_tangent, k);
    double b = k >= 1 ? binomial(n - 1, k - 1) * std::pow(lam_tangent, k - 1) * lam_radial : 0.0;
    return a + b;
}

}  // namespace hessval
