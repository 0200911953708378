#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecdkit {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Value type: all operations return new
/// matrices, inputs are never modified.
class CMat {
public:
    CMat() = default;
    CMat(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols) {
        if (rows < 1 || cols < 1) throw std::invalid_argument("CMat: nonpositive dimension");
    }
    CMat(int rows, int cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (rows < 1 || cols < 1) throw std::invalid_argument("CMat: nonpositive dimension");
        if (data_.size() != size_t(rows) * cols)
            throw std::invalid_argument("CMat: entry count mismatch");
    }

    static CMat identity(int n);
    static CMat diag(const std::vector<double>& d);
    static CMat zeros(int rows, int cols) { return CMat(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(int i, int j) { return data_[size_t(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const { return data_[size_t(i) * cols_ + j]; }

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    CMat adjoint() const;
    CMat transpose() const;
    cplx trace() const;
    double norm_fro() const;
    double max_abs() const;

    /// max_{ij} |M_ij - conj(M_ji)|, rows==cols required.
    double hermiticity_defect() const;
    bool is_hermitian(double rel_tol = 1e-12) const;

    CMat& operator+=(const CMat& o);
    CMat& operator-=(const CMat& o);
    CMat& operator*=(cplx s);

private:
    int rows_ = 0, cols_ = 0;
    std::vector<cplx> data_;
};

CMat operator+(CMat a, const CMat& b);
CMat operator-(CMat a, const CMat& b);
CMat operator*(cplx s, CMat a);
CMat operator*(const CMat& a, const CMat& b);
std::vector<cplx> operator*(const CMat& a, const std::vector<cplx>& v);

/// Ordered tensor factor dimensions annotating a square matrix.
struct DimSplit {
    std::vector<int> dims;

    int total() const {
        int p = 1;
        for (int d : dims) p *= d;
        return p;
    }
    void check(const CMat& m) const;
};

/// Kronecker product, index convention (i_a, i_b) -> i_a*cols(b) + i_b.
CMat tensor(const CMat& a, const CMat& b);

/// Trace over the factors NOT listed in `keep` (indices into split.dims,
/// ascending). Result is ordered by the kept factors.
CMat partial_trace(const CMat& m, const DimSplit& split, const std::vector<int>& keep);

/// Sum of singular values.
double trace_norm(const CMat& m);

struct EigResult {
    std::vector<double> values;  // ascending
    CMat vectors;                // columns are orthonormal eigenvectors
};

/// Hermitian eigendecomposition. Throws if the input fails the hermiticity
/// tolerance.
EigResult herm_eig(const CMat& m);

/// Largest eigenvalue of a Hermitian matrix (no eigenvectors).
double herm_eig_max(const CMat& m);

/// PSD square root; eigenvalues in [-1e-12*||m||, 0) are clamped to 0 and
/// counted in diagnostics::psd_clamp_count. Eigenvalues below that throw.
CMat psd_sqrt(const CMat& m);

struct SVDResult {
    CMat u;                       // rows x r
    std::vector<double> sigma;    // descending
    CMat v;                       // cols x r
};
SVDResult svd(const CMat& m);

/// Unitary polar factor U with m = U * P, P PSD. For rank-deficient m the
/// missing directions are completed arbitrarily (U still unitary).
CMat polar_unitary(const CMat& m);

namespace diagnostics {
/// Count of eigenvalues clamped to zero by psd_sqrt / PSD validation.
std::int64_t psd_clamp_count();
void reset_psd_clamp_count();
void note_psd_clamp(std::int64_t n);
}  // namespace diagnostics

}  // namespace ecdkit
