#include "ecdkit/ref.hpp"

#include <stdexcept>

namespace ecdkit::ref {

CMat multiply(const CMat& a, const CMat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("ref::multiply: shape mismatch");
    CMat r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            cplx s = 0.0;
            for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

CMat tensor(const CMat& a, const CMat& b) {
    CMat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j)
            r(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
    return r;
}

CMat partial_trace(const CMat& m, const DimSplit& split, const std::vector<int>& keep) {
    split.check(m);
    const int nf = int(split.dims.size());
    std::vector<bool> kept(nf, false);
    for (int k : keep) {
        if (k < 0 || k >= nf) throw std::invalid_argument("ref::partial_trace: bad keep index");
        kept[k] = true;
    }
    int dk = 1;
    for (int f = 0; f < nf; ++f)
        if (kept[f]) dk *= split.dims[f];
    CMat r(dk, dk);

    // Walk every (row, col) entry of the full matrix, decompose both flat
    // indices into per-factor digits, and accumulate entries whose traced
    // digits agree.
    const int n = m.rows();
    std::vector<int> di(nf), dj(nf);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int ri = i, rj = j;
            for (int f = nf - 1; f >= 0; --f) {
                di[f] = ri % split.dims[f];
                ri /= split.dims[f];
                dj[f] = rj % split.dims[f];
                rj /= split.dims[f];
            }
            bool diagonal_on_traced = true;
            int ki = 0, kj = 0;
            for (int f = 0; f < nf; ++f) {
                if (kept[f]) {
                    ki = ki * split.dims[f] + di[f];
                    kj = kj * split.dims[f] + dj[f];
                } else if (di[f] != dj[f]) {
                    diagonal_on_traced = false;
                    break;
                }
            }
            if (diagonal_on_traced) r(ki, kj) += m(i, j);
        }
    return r;
}

}  // namespace ecdkit::ref
