#ifndef FERMRED_MATRIX_HPP
#define FERMRED_MATRIX_HPP

#include <cassert>
#include <complex>
#include <cstddef>
#include <vector>

namespace fermred {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Square for operators, rectangular for
// block coefficient matrices.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cplx(0.0, 0.0)) {}

    static Mat identity(std::size_t d) {
        Mat m(d, d);
        for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }
    const cplx& operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }

    Mat adjoint() const {
        Mat m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    Mat transpose() const {
        Mat m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    Mat& operator+=(const Mat& o) {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    Mat& operator*=(cplx s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(cplx s, Mat a) { return a *= s; }

    friend Mat operator*(const Mat& a, const Mat& b) {
        assert(a.cols_ == b.rows_);
        Mat c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += aik * b(k, j);
            }
        return c;
    }

    cplx trace() const {
        assert(square());
        cplx t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    // max |a_ij - b_ij|
    static double max_abs_diff(const Mat& a, const Mat& b) {
        assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
        double m = 0.0;
        for (std::size_t k = 0; k < a.a_.size(); ++k)
            m = std::max(m, std::abs(a.a_[k] - b.a_[k]));
        return m;
    }

    double hermiticity_defect() const {
        assert(square());
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

inline std::vector<cplx> mat_vec(const Mat& m, const std::vector<cplx>& v) {
    assert(m.cols() == v.size());
    std::vector<cplx> r(m.rows(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

} // namespace fermred

#endif
