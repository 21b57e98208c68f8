#pragma once

// Exact field arithmetic and sparse matrices over Q or F_p.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hhx::linalg {

using Scalar = mpq_class;

class LinalgError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The ground field: the rationals or a prime field F_p with p < 2^31.
///
/// Scalars are plain mpq values; the field keeps them canonical. Over Q that
/// is lowest terms with positive denominator (GMP's own invariant), over F_p
/// an integer residue in [0, p).
class Field {
public:
    enum class Kind { Rationals, Prime };

    static Field rationals() { return Field(Kind::Rationals, 0); }
    static Field prime(std::uint32_t p);

    Kind kind() const { return kind_; }
    bool is_prime() const { return kind_ == Kind::Prime; }
    std::uint32_t characteristic() const { return p_; }

    Scalar reduce(const Scalar& x) const;
    Scalar from_int(long v) const { return reduce(Scalar(v)); }
    /// Accepts "a", "-a", "a/b". Over F_p the fraction is a * b^{-1}.
    Scalar parse(const std::string& text) const;

    Scalar add(const Scalar& a, const Scalar& b) const { return reduce(a + b); }
    Scalar sub(const Scalar& a, const Scalar& b) const { return reduce(a - b); }
    Scalar mul(const Scalar& a, const Scalar& b) const { return reduce(a * b); }
    Scalar neg(const Scalar& a) const { return reduce(-a); }
    Scalar inv(const Scalar& a) const;

    std::string to_string(const Scalar& a) const { return a.get_str(); }
    std::string name() const;

    bool operator==(const Field& other) const { return kind_ == other.kind_ && p_ == other.p_; }

private:
    Field(Kind k, std::uint32_t p) : kind_(k), p_(p) {}
    Kind kind_;
    std::uint32_t p_;
};

bool is_prime_u32(std::uint32_t n);

struct Entry {
    std::size_t col;
    Scalar value;
};

using SparseRow = std::vector<Entry>;

/// Sparse row-major matrix. Rows are kept sorted by column with no stored
/// zeros; instances are immutable once constructed.
class Matrix {
public:
    Matrix(Field field, std::size_t rows, std::size_t cols);
    /// Rows may be unsorted and contain duplicate columns; duplicates are summed.
    Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<SparseRow> data);

    static Matrix zero(Field field, std::size_t rows, std::size_t cols) { return Matrix(field, rows, cols); }
    static Matrix identity(Field field, std::size_t n);
    static Matrix from_dense(Field field, const std::vector<std::vector<Scalar>>& dense);
    static Matrix from_dense(Field field, const std::vector<std::vector<long>>& dense);

    const Field& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nonzeros() const;
    const SparseRow& row(std::size_t r) const { return data_[r]; }
    Scalar at(std::size_t r, std::size_t c) const;
    bool is_zero() const { return nonzeros() == 0; }

    std::vector<std::vector<Scalar>> to_dense() const;
    Matrix transpose() const;
    Matrix scaled(const Scalar& s) const;
    Matrix permuted(const std::vector<std::size_t>& row_perm, const std::vector<std::size_t>& col_perm) const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend bool operator==(const Matrix& a, const Matrix& b);

private:
    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<SparseRow> data_;
};

Matrix matrix_product(const Matrix& a, const Matrix& b);
std::size_t rank(const Matrix& m);
std::size_t kernel_dim(const Matrix& m);

} // namespace hhx::linalg
