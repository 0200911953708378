#include "ecdkit/matcore.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>

namespace ecdkit {

using EMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMat>;
using CEMap = Eigen::Map<const EMat>;

namespace {
CEMap emap(const CMat& m) { return CEMap(m.data().data(), m.rows(), m.cols()); }
EMap emap(CMat& m) { return EMap(m.data().data(), m.rows(), m.cols()); }
}  // namespace

CMat CMat::identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMat CMat::diag(const std::vector<double>& d) {
    CMat m(int(d.size()), int(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(int(i), int(i)) = d[i];
    return m;
}

CMat CMat::adjoint() const {
    CMat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

CMat CMat::transpose() const {
    CMat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

cplx CMat::trace() const {
    if (!square()) throw std::invalid_argument("trace: matrix not square");
    cplx t = 0.0;
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double CMat::norm_fro() const {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

double CMat::max_abs() const {
    double m = 0.0;
    for (const cplx& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double CMat::hermiticity_defect() const {
    if (!square()) throw std::invalid_argument("hermiticity_defect: matrix not square");
    double d = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = i; j < cols_; ++j)
            d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
}

bool CMat::is_hermitian(double rel_tol) const {
    return square() && hermiticity_defect() <= rel_tol * (1.0 + max_abs());
}

CMat& CMat::operator+=(const CMat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("CMat +=: shape mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

CMat& CMat::operator-=(const CMat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("CMat -=: shape mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

CMat& CMat::operator*=(cplx s) {
    for (cplx& z : data_) z *= s;
    return *this;
}

CMat operator+(CMat a, const CMat& b) { return a += b; }
CMat operator-(CMat a, const CMat& b) { return a -= b; }
CMat operator*(cplx s, CMat a) { return a *= s; }

CMat operator*(const CMat& a, const CMat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("CMat *: shape mismatch");
    CMat r(a.rows(), b.cols());
    const int n = a.rows(), m = b.cols(), k = a.cols();
#pragma omp parallel for schedule(static) if (size_t(n) * m * k > 65536)
    for (int i = 0; i < n; ++i) {
        for (int p = 0; p < k; ++p) {
            const cplx aip = a(i, p);
            if (aip == 0.0) continue;
            for (int j = 0; j < m; ++j) r(i, j) += aip * b(p, j);
        }
    }
    return r;
}

std::vector<cplx> operator*(const CMat& a, const std::vector<cplx>& v) {
    if (size_t(a.cols()) != v.size()) throw std::invalid_argument("CMat * vec: shape mismatch");
    std::vector<cplx> r(a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        cplx s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

void DimSplit::check(const CMat& m) const {
    for (int d : dims)
        if (d < 1) throw std::invalid_argument("DimSplit: factor < 1");
    if (!m.square() || total() != m.rows())
        throw std::invalid_argument("DimSplit: product inconsistent with matrix dimension");
}

CMat tensor(const CMat& a, const CMat& b) {
    CMat r(a.rows() * b.rows(), a.cols() * b.cols());
    const int ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
#pragma omp parallel for collapse(2) schedule(static) \
    if (size_t(ar) * ac * br * bc > 65536)
    for (int ia = 0; ia < ar; ++ia)
        for (int ib = 0; ib < br; ++ib)
            for (int ja = 0; ja < ac; ++ja) {
                const cplx v = a(ia, ja);
                if (v == 0.0) continue;
                for (int jb = 0; jb < bc; ++jb)
                    r(ia * br + ib, ja * bc + jb) = v * b(ib, jb);
            }
    return r;
}

CMat partial_trace(const CMat& m, const DimSplit& split, const std::vector<int>& keep) {
    split.check(m);
    const int nf = int(split.dims.size());
    std::vector<bool> kept(nf, false);
    for (int k : keep) {
        if (k < 0 || k >= nf) throw std::invalid_argument("partial_trace: keep index out of range");
        kept[k] = true;
    }
    int dk = 1, dt = 1;
    for (int f = 0; f < nf; ++f) (kept[f] ? dk : dt) *= split.dims[f];

    // strides of each factor in the full index
    std::vector<int> stride(nf, 1);
    for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * split.dims[f + 1];

    // enumerate kept and traced multi-indices as flat offsets into the full index
    auto offsets = [&](bool want_kept) {
        std::vector<int> offs{0};
        for (int f = 0; f < nf; ++f) {
            if (kept[f] != want_kept) continue;
            std::vector<int> next;
            next.reserve(offs.size() * split.dims[f]);
            for (int o : offs)
                for (int x = 0; x < split.dims[f]; ++x) next.push_back(o + x * stride[f]);
            offs = std::move(next);
        }
        return offs;
    };
    const std::vector<int> koff = offsets(true);
    const std::vector<int> toff = offsets(false);

    CMat r(dk, dk);
#pragma omp parallel for schedule(static) if (size_t(dk) * dk * dt > 65536)
    for (int i = 0; i < dk; ++i)
        for (int j = 0; j < dk; ++j) {
            cplx s = 0.0;
            for (int t : toff) s += m(koff[i] + t, koff[j] + t);
            r(i, j) = s;
        }
    return r;
}

double trace_norm(const CMat& m) {
    Eigen::BDCSVD<Eigen::MatrixXcd> s(emap(m));
    return s.singularValues().sum();
}

EigResult herm_eig(const CMat& m) {
    if (!m.is_hermitian())
        throw std::invalid_argument("herm_eig: input not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(emap(m));
    if (es.info() != Eigen::Success) throw std::runtime_error("herm_eig: solver failed");
    EigResult r;
    r.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
    r.vectors = CMat(m.rows(), m.cols());
    emap(r.vectors) = es.eigenvectors();
    return r;
}

double herm_eig_max(const CMat& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(emap(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(m.rows() - 1);
}

namespace diagnostics {
namespace {
std::atomic<std::int64_t> g_psd_clamps{0};
}
std::int64_t psd_clamp_count() { return g_psd_clamps.load(); }
void reset_psd_clamp_count() { g_psd_clamps.store(0); }
void note_psd_clamp(std::int64_t n) { g_psd_clamps.fetch_add(n); }
}  // namespace diagnostics

CMat psd_sqrt(const CMat& m) {
    EigResult e = herm_eig(m);
    const double scale = std::abs(e.values.empty() ? 0.0 : std::max(std::abs(e.values.front()),
                                                                    std::abs(e.values.back())));
    std::int64_t clamped = 0;
    std::vector<double> s(e.values.size());
    for (size_t i = 0; i < e.values.size(); ++i) {
        double v = e.values[i];
        if (v < -1e-12 * std::max(scale, 1e-300) && v < -1e-300)
            throw std::domain_error("psd_sqrt: eigenvalue below -1e-12*||m||, input not PSD");
        if (v < 0.0) {
            v = 0.0;
            ++clamped;
        }
        s[i] = std::sqrt(v);
    }
    if (clamped) diagnostics::note_psd_clamp(clamped);
    // U sqrt(Lambda) U*
    CMat us = e.vectors;
    for (int i = 0; i < us.rows(); ++i)
        for (int j = 0; j < us.cols(); ++j) us(i, j) *= s[j];
    return us * e.vectors.adjoint();
}

SVDResult svd(const CMat& m) {
    Eigen::BDCSVD<Eigen::MatrixXcd> s(emap(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
    SVDResult r;
    const int k = int(s.singularValues().size());
    r.sigma.assign(s.singularValues().data(), s.singularValues().data() + k);
    r.u = CMat(m.rows(), k);
    r.v = CMat(m.cols(), k);
    emap(r.u) = s.matrixU();
    emap(r.v) = s.matrixV();
    return r;
}

CMat polar_unitary(const CMat& m) {
    if (!m.square()) throw std::invalid_argument("polar_unitary: matrix not square");
    Eigen::BDCSVD<Eigen::MatrixXcd> s(emap(m), Eigen::ComputeFullU | Eigen::ComputeFullV);
    CMat u(m.rows(), m.cols());
    emap(u) = s.matrixU() * s.matrixV().adjoint();
    return u;
}

}  // namespace ecdkit
