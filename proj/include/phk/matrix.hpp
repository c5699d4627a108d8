#pragma once

#include <stdexcept>
#include <vector>

#include "phk/polynomial.hpp"

namespace phk {

/// Dense matrix over an exact field F (row major). All algorithms are exact
/// Gaussian elimination; no pivoting heuristics beyond first-nonzero.
template <class F>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t r, std::size_t c, const F& fill = F(0))
        : rows_(r), cols_(c), a_(r * c, fill) {}
    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
        return m;
    }
    static Matrix from_rows(const std::vector<std::vector<F>>& rows) {
        if (rows.empty()) return Matrix();
        Matrix m(rows.size(), rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_) throw std::invalid_argument("Matrix: ragged rows");
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    F& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const F& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!(x == F(0))) return false;
        return true;
    }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = r.a_[i] + o.a_[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = r.a_[i] - o.a_[i];
        return r;
    }
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
        Matrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const F& x = (*this)(i, k);
                if (x == F(0)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) = r(i, j) + x * o(k, j);
            }
        return r;
    }
    Matrix operator*(const F& s) const {
        Matrix r = *this;
        for (auto& x : r.a_) x = x * s;
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    F trace() const {
        if (rows_ != cols_) throw std::invalid_argument("Matrix::trace: not square");
        F t(0);
        for (std::size_t i = 0; i < rows_; ++i) t = t + (*this)(i, i);
        return t;
    }

    /// Kronecker product.
    Matrix kron(const Matrix& o) const {
        Matrix r(rows_ * o.rows_, cols_ * o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                if ((*this)(i, j) == F(0)) continue;
                for (std::size_t k = 0; k < o.rows_; ++k)
                    for (std::size_t l = 0; l < o.cols_; ++l)
                        r(i * o.rows_ + k, j * o.cols_ + l) = (*this)(i, j) * o(k, l);
            }
        return r;
    }

    static Matrix block_diag(const std::vector<Matrix>& blocks) {
        std::size_t r = 0, c = 0;
        for (const auto& b : blocks) { r += b.rows(); c += b.cols(); }
        Matrix m(r, c);
        std::size_t ro = 0, co = 0;
        for (const auto& b : blocks) {
            for (std::size_t i = 0; i < b.rows(); ++i)
                for (std::size_t j = 0; j < b.cols(); ++j) m(ro + i, co + j) = b(i, j);
            ro += b.rows();
            co += b.cols();
        }
        return m;
    }

    /// Row-reduced echelon form; returns pivot column indices.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t row = 0;
        for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
            std::size_t sel = row;
            while (sel < rows_ && (*this)(sel, col) == F(0)) ++sel;
            if (sel == rows_) continue;
            swap_rows(sel, row);
            F inv = F(1) / (*this)(row, col);
            for (std::size_t j = col; j < cols_; ++j) (*this)(row, j) = (*this)(row, j) * inv;
            for (std::size_t r = 0; r < rows_; ++r) {
                if (r == row || (*this)(r, col) == F(0)) continue;
                F f = (*this)(r, col);
                for (std::size_t j = col; j < cols_; ++j)
                    (*this)(r, j) = (*this)(r, j) - f * (*this)(row, j);
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    std::size_t rank() const {
        Matrix m = *this;
        return m.rref().size();
    }

    /// Basis of the right kernel, as columns of the returned matrix.
    Matrix kernel() const {
        Matrix m = *this;
        auto pivots = m.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (auto p : pivots) is_pivot[p] = true;
        std::size_t k = cols_ - pivots.size();
        Matrix ker(cols_, k);
        std::size_t idx = 0;
        for (std::size_t col = 0; col < cols_; ++col) {
            if (is_pivot[col]) continue;
            ker(col, idx) = F(1);
            for (std::size_t r = 0; r < pivots.size(); ++r)
                ker(pivots[r], idx) = F(0) - m(r, col);
            ++idx;
        }
        return ker;
    }

    Matrix inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("Matrix::inverse: not square");
        Matrix aug(rows_, 2 * cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, cols_ + i) = F(1);
        }
        auto pivots = aug.rref();
        if (pivots.size() != rows_ || pivots.back() >= cols_)
            throw std::domain_error("Matrix::inverse: singular matrix");
        Matrix inv(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) inv(i, j) = aug(i, cols_ + j);
        return inv;
    }

    bool is_invertible() const { return rows_ == cols_ && rank() == rows_; }

    /// Solves A x = b for a single right-hand side; throws when inconsistent.
    std::vector<F> solve(const std::vector<F>& b) const {
        if (b.size() != rows_) throw std::invalid_argument("Matrix::solve: bad rhs size");
        Matrix aug(rows_, cols_ + 1);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, cols_) = b[i];
        }
        auto pivots = aug.rref();
        if (!pivots.empty() && pivots.back() == cols_)
            throw std::domain_error("Matrix::solve: inconsistent system");
        std::vector<F> x(cols_, F(0));
        for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, cols_);
        return x;
    }

    F det() const {
        if (rows_ != cols_) throw std::invalid_argument("Matrix::det: not square");
        Matrix m = *this;
        F d(1);
        std::size_t row = 0;
        for (std::size_t col = 0; col < cols_; ++col) {
            std::size_t sel = row;
            while (sel < rows_ && m(sel, col) == F(0)) ++sel;
            if (sel == rows_) return F(0);
            if (sel != row) { m.swap_rows(sel, row); d = F(0) - d; }
            d = d * m(row, col);
            F inv = F(1) / m(row, col);
            for (std::size_t r = row + 1; r < rows_; ++r) {
                if (m(r, col) == F(0)) continue;
                F f = m(r, col) * inv;
                for (std::size_t j = col; j < cols_; ++j) m(r, j) = m(r, j) - f * m(row, j);
            }
            ++row;
        }
        return d;
    }

    /// Characteristic polynomial via the Faddeev-LeVerrier recursion (char 0 only).
    Poly<F> charpoly() const {
        if (rows_ != cols_) throw std::invalid_argument("Matrix::charpoly: not square");
        std::size_t n = rows_;
        std::vector<F> c(n + 1, F(0));
        c[n] = F(1);
        Matrix m(n, n);
        for (std::size_t k = 1; k <= n; ++k) {
            m = (*this) * m;
            for (std::size_t i = 0; i < n; ++i) m(i, i) = m(i, i) + c[n - k + 1];
            F t = ((*this) * m).trace();
            c[n - k] = F(0) - t / F(static_cast<int>(k));
        }
        return Poly<F>(c);
    }

    /// Minimal polynomial via Krylov relations, lcm over standard basis vectors.
    Poly<F> minpoly() const {
        if (rows_ != cols_) throw std::invalid_argument("Matrix::minpoly: not square");
        std::size_t n = rows_;
        Poly<F> m = Poly<F>::constant(F(1));
        for (std::size_t s = 0; s < n; ++s) {
            // krylov chain from e_s
            std::vector<std::vector<F>> chain;
            std::vector<F> v(n, F(0));
            v[s] = F(1);
            chain.push_back(v);
            Poly<F> rel;
            for (std::size_t k = 1; k <= n; ++k) {
                std::vector<F> w(n, F(0));
                for (std::size_t i = 0; i < n; ++i) {
                    if (chain.back()[i] == F(0)) continue;
                    for (std::size_t r = 0; r < n; ++r)
                        w[r] = w[r] + (*this)(r, i) * chain.back()[i];
                }
                // test dependence of w on chain
                Matrix sys(n, chain.size());
                for (std::size_t j = 0; j < chain.size(); ++j)
                    for (std::size_t i = 0; i < n; ++i) sys(i, j) = chain[j][i];
                try {
                    std::vector<F> coef = sys.solve(w);
                    std::vector<F> pc(chain.size() + 1, F(0));
                    for (std::size_t j = 0; j < chain.size(); ++j) pc[j] = F(0) - coef[j];
                    pc[chain.size()] = F(1);
                    rel = Poly<F>(pc);
                    break;
                } catch (const std::domain_error&) {
                    chain.push_back(w);
                }
            }
            if (rel.is_zero()) throw std::logic_error("Matrix::minpoly: no relation found");
            m = m * (rel / poly_gcd(m, rel));
        }
        return m.monic();
    }

    Matrix submatrix_columns(const std::vector<std::size_t>& cols) const {
        Matrix r(rows_, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows_; ++i) r(i, j) = (*this)(i, cols[j]);
        return r;
    }

    std::vector<F> column(std::size_t j) const {
        std::vector<F> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    Matrix hstack(const Matrix& o) const {
        if (rows_ != o.rows_) throw std::invalid_argument("Matrix::hstack: row mismatch");
        Matrix r(rows_, cols_ + o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, cols_ + j) = o(i, j);
        }
        return r;
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Matrix: shape mismatch");
    }
    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap(a_[i * cols_ + c], a_[j * cols_ + c]);
    }

    std::size_t rows_, cols_;
    std::vector<F> a_;
};

} // namespace phk
