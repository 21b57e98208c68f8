#include "hhx/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace hhx::linalg {

bool is_prime_u32(std::uint32_t n)
{
    if (n < 2)
        return false;
    if (n % 2 == 0)
        return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0)
            return false;
    return true;
}

Field Field::prime(std::uint32_t p)
{
    if (p >= (1u << 31))
        throw LinalgError("prime field modulus must be below 2^31, got " + std::to_string(p));
    if (!is_prime_u32(p))
        throw LinalgError("prime field modulus is not prime: " + std::to_string(p));
    return Field(Kind::Prime, p);
}

Scalar Field::reduce(const Scalar& x) const
{
    if (kind_ == Kind::Rationals)
        return x;
    mpz_class modulus(p_);
    mpz_class num = x.get_num() % modulus;
    mpz_class den = x.get_den() % modulus;
    if (den == 0)
        throw LinalgError("denominator " + x.get_den().get_str() + " vanishes in F_" + std::to_string(p_));
    if (den != 1) {
        mpz_class den_inv;
        mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t());
        num = (num * den_inv) % modulus;
    }
    if (num < 0)
        num += modulus;
    return Scalar(num);
}

Scalar Field::parse(const std::string& text) const
{
    Scalar q;
    try {
        if (text.empty() || q.set_str(text, 10) != 0)
            throw LinalgError("not a rational literal: '" + text + "'");
    } catch (const std::invalid_argument&) {
        throw LinalgError("not a rational literal: '" + text + "'");
    }
    if (q.get_den() == 0)
        throw LinalgError("zero denominator in '" + text + "'");
    q.canonicalize();
    return reduce(q);
}

Scalar Field::inv(const Scalar& a) const
{
    if (a == 0)
        throw LinalgError("inverse of zero");
    if (kind_ == Kind::Rationals)
        return 1 / a;
    mpz_class r;
    mpz_class modulus(p_);
    mpz_invert(r.get_mpz_t(), a.get_num_mpz_t(), modulus.get_mpz_t());
    return Scalar(r);
}

std::string Field::name() const
{
    return kind_ == Kind::Rationals ? std::string("Q") : "F_" + std::to_string(p_);
}

// ---------------------------------------------------------------------------

namespace {

void normalize_row(const Field& field, SparseRow& row)
{
    std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    SparseRow out;
    out.reserve(row.size());
    for (auto& e : row) {
        if (!out.empty() && out.back().col == e.col)
            out.back().value += e.value;
        else
            out.push_back(std::move(e));
    }
    SparseRow kept;
    kept.reserve(out.size());
    for (auto& e : out) {
        e.value = field.reduce(e.value);
        if (e.value != 0)
            kept.push_back(std::move(e));
    }
    row = std::move(kept);
}

void require_same_field(const Matrix& a, const Matrix& b)
{
    if (!(a.field() == b.field()))
        throw LinalgError("matrices over different fields: " + a.field().name() + " vs " + b.field().name());
}

} // namespace

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows)
{
}

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<SparseRow> data)
    : field_(field), rows_(rows), cols_(cols), data_(std::move(data))
{
    if (data_.size() != rows_)
        throw LinalgError("row count mismatch: " + std::to_string(data_.size()) + " rows supplied for " + std::to_string(rows_));
    for (auto& row : data_) {
        for (const auto& e : row)
            if (e.col >= cols_)
                throw LinalgError("column index " + std::to_string(e.col) + " out of range " + std::to_string(cols_));
        normalize_row(field_, row);
    }
}

Matrix Matrix::identity(Field field, std::size_t n)
{
    std::vector<SparseRow> data(n);
    for (std::size_t i = 0; i < n; ++i)
        data[i].push_back({i, Scalar(1)});
    return Matrix(field, n, n, std::move(data));
}

Matrix Matrix::from_dense(Field field, const std::vector<std::vector<Scalar>>& dense)
{
    std::size_t rows = dense.size();
    std::size_t cols = rows ? dense[0].size() : 0;
    std::vector<SparseRow> data(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        if (dense[r].size() != cols)
            throw LinalgError("ragged dense matrix");
        for (std::size_t c = 0; c < cols; ++c)
            if (dense[r][c] != 0)
                data[r].push_back({c, dense[r][c]});
    }
    return Matrix(field, rows, cols, std::move(data));
}

Matrix Matrix::from_dense(Field field, const std::vector<std::vector<long>>& dense)
{
    std::vector<std::vector<Scalar>> q(dense.size());
    for (std::size_t r = 0; r < dense.size(); ++r)
        q[r].assign(dense[r].begin(), dense[r].end());
    return from_dense(field, q);
}

std::size_t Matrix::nonzeros() const
{
    std::size_t n = 0;
    for (const auto& row : data_)
        n += row.size();
    return n;
}

Scalar Matrix::at(std::size_t r, std::size_t c) const
{
    if (r >= rows_ || c >= cols_)
        throw LinalgError("matrix index out of range");
    const auto& row = data_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, std::size_t col) { return e.col < col; });
    if (it != row.end() && it->col == c)
        return it->value;
    return Scalar(0);
}

std::vector<std::vector<Scalar>> Matrix::to_dense() const
{
    std::vector<std::vector<Scalar>> out(rows_, std::vector<Scalar>(cols_));
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& e : data_[r])
            out[r][e.col] = e.value;
    return out;
}

Matrix Matrix::transpose() const
{
    std::vector<SparseRow> data(cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& e : data_[r])
            data[e.col].push_back({r, e.value});
    return Matrix(field_, cols_, rows_, std::move(data));
}

Matrix Matrix::scaled(const Scalar& s) const
{
    std::vector<SparseRow> data(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        data[r].reserve(data_[r].size());
        for (const auto& e : data_[r])
            data[r].push_back({e.col, e.value * s});
    }
    return Matrix(field_, rows_, cols_, std::move(data));
}

Matrix Matrix::permuted(const std::vector<std::size_t>& row_perm, const std::vector<std::size_t>& col_perm) const
{
    if (row_perm.size() != rows_ || col_perm.size() != cols_)
        throw LinalgError("permutation size mismatch");
    std::vector<SparseRow> data(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& e : data_[r])
            data[row_perm[r]].push_back({col_perm[e.col], e.value});
    return Matrix(field_, rows_, cols_, std::move(data));
}

Matrix operator*(const Matrix& a, const Matrix& b)
{
    require_same_field(a, b);
    if (a.cols_ != b.rows_)
        throw LinalgError("dimension mismatch in product: " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                          " times " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
    std::vector<SparseRow> data(a.rows_);
    // Dense accumulator with a touched list, reused across rows.
    std::vector<Scalar> acc(b.cols_);
    std::vector<char> used(b.cols_, 0);
    std::vector<std::size_t> touched;
    Scalar tmp;
    for (std::size_t r = 0; r < a.rows_; ++r) {
        touched.clear();
        for (const auto& ea : a.data_[r]) {
            for (const auto& eb : b.data_[ea.col]) {
                tmp = ea.value * eb.value;
                if (!used[eb.col]) {
                    used[eb.col] = 1;
                    acc[eb.col] = tmp;
                    touched.push_back(eb.col);
                } else {
                    acc[eb.col] += tmp;
                }
            }
        }
        std::sort(touched.begin(), touched.end());
        auto& out = data[r];
        for (std::size_t c : touched) {
            Scalar v = a.field_.reduce(acc[c]);
            if (v != 0)
                out.push_back({c, std::move(v)});
            used[c] = 0;
        }
    }
    Matrix result(a.field_, a.rows_, b.cols_);
    result.data_ = std::move(data);
    return result;
}

Matrix operator+(const Matrix& a, const Matrix& b)
{
    require_same_field(a, b);
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw LinalgError("dimension mismatch in sum");
    std::vector<SparseRow> data(a.rows_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
        data[r] = a.data_[r];
        data[r].insert(data[r].end(), b.data_[r].begin(), b.data_[r].end());
    }
    return Matrix(a.field_, a.rows_, a.cols_, std::move(data));
}

Matrix operator-(const Matrix& a, const Matrix& b)
{
    return a + b.scaled(Scalar(-1));
}

bool operator==(const Matrix& a, const Matrix& b)
{
    if (!(a.field_ == b.field_) || a.rows_ != b.rows_ || a.cols_ != b.cols_)
        return false;
    for (std::size_t r = 0; r < a.rows_; ++r) {
        const auto& x = a.data_[r];
        const auto& y = b.data_[r];
        if (x.size() != y.size())
            return false;
        for (std::size_t k = 0; k < x.size(); ++k)
            if (x[k].col != y[k].col || x[k].value != y[k].value)
                return false;
    }
    return true;
}

Matrix matrix_product(const Matrix& a, const Matrix& b)
{
    return a * b;
}

// ---------------------------------------------------------------------------
// Rank.
//
// Both routines eliminate incrementally: each incoming row is reduced against
// the pivot rows found so far, keyed by leading column, and becomes a new
// pivot if anything survives. The shorter side of the matrix is fed in as
// rows, so at most min(rows, cols) reductions produce pivots.

namespace {

using ModRow = std::vector<std::pair<std::size_t, std::uint64_t>>;

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p)
{
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1)
            r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

// row <- row - factor * pivot, both sorted.
void axpy_mod(ModRow& row, const ModRow& pivot, std::uint64_t factor, std::uint64_t p, ModRow& scratch)
{
    scratch.clear();
    std::size_t i = 0, j = 0;
    std::uint64_t neg = (p - factor) % p;
    while (i < row.size() || j < pivot.size()) {
        if (j == pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
            scratch.push_back(row[i++]);
        } else if (i == row.size() || pivot[j].first < row[i].first) {
            scratch.emplace_back(pivot[j].first, pivot[j].second * neg % p);
            ++j;
        } else {
            std::uint64_t v = (row[i].second + pivot[j].second * neg) % p;
            if (v)
                scratch.emplace_back(row[i].first, v);
            ++i;
            ++j;
        }
    }
    row.swap(scratch);
}

std::size_t rank_mod_p(const std::vector<SparseRow>& rows, std::uint64_t p)
{
    std::vector<ModRow> input;
    input.reserve(rows.size());
    for (const auto& r : rows) {
        if (r.empty())
            continue;
        ModRow m;
        m.reserve(r.size());
        for (const auto& e : r)
            m.emplace_back(e.col, e.value.get_num().get_ui());
        input.push_back(std::move(m));
    }
    std::stable_sort(input.begin(), input.end(), [](const ModRow& a, const ModRow& b) { return a.size() < b.size(); });

    std::unordered_map<std::size_t, ModRow> pivots;
    ModRow scratch;
    for (auto& row : input) {
        while (!row.empty()) {
            auto it = pivots.find(row.front().first);
            if (it == pivots.end()) {
                std::uint64_t inv = pow_mod(row.front().second, p - 2, p);
                for (auto& e : row)
                    e.second = e.second * inv % p;
                std::size_t lead = row.front().first;
                pivots.emplace(lead, std::move(row));
                break;
            }
            axpy_mod(row, it->second, row.front().second, p, scratch);
        }
    }
    return pivots.size();
}

using IntRow = std::vector<std::pair<std::size_t, mpz_class>>;

void make_primitive(IntRow& row)
{
    if (row.empty())
        return;
    mpz_class g = 0;
    for (const auto& e : row) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
        if (g == 1)
            break;
    }
    if (row.front().second < 0)
        g = -g;
    if (g != 1)
        for (auto& e : row)
            mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

// row <- a * row - b * pivot (fraction-free step), both sorted.
void combine_int(IntRow& row, const IntRow& pivot, const mpz_class& a, const mpz_class& b, IntRow& scratch)
{
    scratch.clear();
    std::size_t i = 0, j = 0;
    mpz_class v;
    while (i < row.size() || j < pivot.size()) {
        if (j == pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
            scratch.emplace_back(row[i].first, a * row[i].second);
            ++i;
        } else if (i == row.size() || pivot[j].first < row[i].first) {
            scratch.emplace_back(pivot[j].first, -b * pivot[j].second);
            ++j;
        } else {
            v = a * row[i].second - b * pivot[j].second;
            if (v != 0)
                scratch.emplace_back(row[i].first, v);
            ++i;
            ++j;
        }
    }
    row.swap(scratch);
}

std::size_t rank_rational(const std::vector<SparseRow>& rows)
{
    std::vector<IntRow> input;
    input.reserve(rows.size());
    for (const auto& r : rows) {
        if (r.empty())
            continue;
        // Clear denominators.
        mpz_class l = 1;
        for (const auto& e : r)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.value.get_den_mpz_t());
        IntRow m;
        m.reserve(r.size());
        for (const auto& e : r)
            m.emplace_back(e.col, e.value.get_num() * (l / e.value.get_den()));
        make_primitive(m);
        input.push_back(std::move(m));
    }
    std::stable_sort(input.begin(), input.end(), [](const IntRow& a, const IntRow& b) { return a.size() < b.size(); });

    std::unordered_map<std::size_t, IntRow> pivots;
    IntRow scratch;
    mpz_class g, a, b;
    for (auto& row : input) {
        while (!row.empty()) {
            auto it = pivots.find(row.front().first);
            if (it == pivots.end()) {
                std::size_t lead = row.front().first;
                pivots.emplace(lead, std::move(row));
                break;
            }
            const auto& pivot = it->second;
            mpz_gcd(g.get_mpz_t(), pivot.front().second.get_mpz_t(), row.front().second.get_mpz_t());
            a = pivot.front().second / g;
            b = row.front().second / g;
            combine_int(row, pivot, a, b, scratch);
            make_primitive(row);
        }
    }
    return pivots.size();
}

} // namespace

std::size_t rank(const Matrix& m)
{
    if (m.rows() == 0 || m.cols() == 0)
        return 0;
    std::vector<SparseRow> rows;
    if (m.rows() > m.cols()) {
        Matrix t = m.transpose();
        rows.reserve(t.rows());
        for (std::size_t r = 0; r < t.rows(); ++r)
            rows.push_back(t.row(r));
    } else {
        rows.reserve(m.rows());
        for (std::size_t r = 0; r < m.rows(); ++r)
            rows.push_back(m.row(r));
    }
    if (m.field().is_prime())
        return rank_mod_p(rows, m.field().characteristic());
    return rank_rational(rows);
}

std::size_t kernel_dim(const Matrix& m)
{
    return m.cols() - rank(m);
}

} // namespace hhx::linalg
