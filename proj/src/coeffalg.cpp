#include "hhx/coeffalg.hpp"

#include <set>

namespace hhx::coeffalg {

using nlohmann::json;

namespace {

std::string vec_str(const Field& f, const Vector& v)
{
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k)
        s += (k ? ", " : "") + f.to_string(v[k]);
    return s + ")";
}

} // namespace

Algebra::Algebra(Field field, std::vector<std::string> basis, std::vector<std::vector<Vector>> mul)
    : field_(field), basis_(std::move(basis)), mul_(std::move(mul))
{
    const std::size_t d = basis_.size();
    if (d == 0)
        throw AlgebraError("algebra must have dimension at least 1");
    if (mul_.size() != d)
        throw AlgebraError("multiplication table must be " + std::to_string(d) + "x" + std::to_string(d));
    for (auto& row : mul_) {
        if (row.size() != d)
            throw AlgebraError("multiplication table must be " + std::to_string(d) + "x" + std::to_string(d));
        for (auto& v : row) {
            if (v.size() != d)
                throw AlgebraError("structure constant vectors must have length " + std::to_string(d));
            for (auto& x : v)
                x = field_.reduce(x);
        }
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (mul_[i][j] != mul_[j][i])
                throw AlgebraError("not commutative: " + basis_[i] + "*" + basis_[j] + " = " + vec_str(field_, mul_[i][j]) +
                                   " but " + basis_[j] + "*" + basis_[i] + " = " + vec_str(field_, mul_[j][i]));
    for (std::size_t i = 0; i < d; ++i)
        if (mul_[0][i] != basis_vector(i))
            throw AlgebraError("basis element 0 ('" + basis_[0] + "') is not a unit: " + basis_[0] + "*" + basis_[i] +
                               " = " + vec_str(field_, mul_[0][i]));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t l = 0; l < d; ++l) {
                auto lhs = multiply(mul_[i][j], basis_vector(l));
                auto rhs = multiply(basis_vector(i), mul_[j][l]);
                if (lhs != rhs)
                    throw AlgebraError("not associative on (" + basis_[i] + ", " + basis_[j] + ", " + basis_[l] + "): " +
                                       vec_str(field_, lhs) + " != " + vec_str(field_, rhs));
            }
}

Vector Algebra::basis_vector(std::size_t t) const
{
    Vector v(dim());
    v.at(t) = 1;
    return v;
}

Vector Algebra::multiply(const Vector& a, const Vector& b) const
{
    const std::size_t d = dim();
    if (a.size() != d || b.size() != d)
        throw AlgebraError("algebra element has wrong length");
    Vector out(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t j = 0; j < d; ++j) {
            if (b[j] == 0)
                continue;
            Scalar c = a[i] * b[j];
            for (std::size_t t = 0; t < d; ++t)
                if (mul_[i][j][t] != 0)
                    out[t] += c * mul_[i][j][t];
        }
    }
    for (auto& x : out)
        x = field_.reduce(x);
    return out;
}

Matrix Algebra::left_multiplication(std::size_t t) const
{
    const std::size_t d = dim();
    std::vector<linalg::SparseRow> rows(d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t r = 0; r < d; ++r)
            if (mul_[t][k][r] != 0)
                rows[r].push_back({k, mul_[t][k][r]});
    return Matrix(field_, d, d, std::move(rows));
}

Algebra ground_field(Field field)
{
    return Algebra(field, {"1"}, {{{Scalar(1)}}});
}

Algebra truncated_polynomial(Field field, std::size_t n)
{
    std::vector<std::string> basis;
    for (std::size_t k = 0; k < n; ++k)
        basis.push_back(k == 0 ? "1" : (k == 1 ? "x" : "x^" + std::to_string(k)));
    std::vector<std::vector<Vector>> mul(n, std::vector<Vector>(n, Vector(n)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i + j < n)
                mul[i][j][i + j] = 1;
    return Algebra(field, std::move(basis), std::move(mul));
}

// ---------------------------------------------------------------------------

namespace {

Field parse_field(const json& f)
{
    if (f.is_string() && f.get<std::string>() == "Q")
        return Field::rationals();
    if (f.is_object() && f.size() == 1 && f.contains("Fp") && f.at("Fp").is_number_unsigned()) {
        auto p = f.at("Fp").get<std::uint64_t>();
        if (p >= (1ull << 31))
            throw DocumentError("prime field modulus must be below 2^31");
        try {
            return Field::prime(static_cast<std::uint32_t>(p));
        } catch (const linalg::LinalgError& e) {
            throw DocumentError(e.what());
        }
    }
    throw DocumentError("field must be \"Q\" or {\"Fp\": p}");
}

json field_to_json(const Field& f)
{
    if (f.is_prime())
        return {{"Fp", f.characteristic()}};
    return "Q";
}

template <class Error>
Scalar parse_scalar(const Field& field, const json& v)
{
    try {
        if (v.is_number_integer())
            return field.from_int(v.get<long>());
        if (v.is_string())
            return field.parse(v.get<std::string>());
    } catch (const linalg::LinalgError& e) {
        throw Error(std::string("field mismatch: ") + e.what());
    }
    throw DocumentError("scalar must be an integer or a \"p/q\" string, got " + v.dump());
}

json scalar_to_json(const Scalar& s)
{
    if (s.get_den() == 1 && s.get_num().fits_slong_p())
        return s.get_num().get_si();
    return s.get_str();
}

Matrix parse_matrix(const Field& field, const json& doc, std::size_t m, const std::string& where)
{
    if (!doc.is_array() || doc.size() != m)
        throw DocumentError(where + ": expected " + std::to_string(m) + " rows");
    std::vector<linalg::SparseRow> rows(m);
    for (std::size_t r = 0; r < m; ++r) {
        if (!doc[r].is_array() || doc[r].size() != m)
            throw DocumentError(where + ": row " + std::to_string(r) + " must have " + std::to_string(m) + " entries");
        for (std::size_t c = 0; c < m; ++c) {
            auto v = parse_scalar<ModuleError>(field, doc[r][c]);
            if (v != 0)
                rows[r].push_back({c, v});
        }
    }
    return Matrix(field, m, m, std::move(rows));
}

json matrix_to_json(const Matrix& m)
{
    json rows = json::array();
    for (const auto& row : m.to_dense()) {
        json r = json::array();
        for (const auto& x : row)
            r.push_back(scalar_to_json(x));
        rows.push_back(r);
    }
    return rows;
}

} // namespace

Algebra parse_algebra(const json& doc, std::optional<Field> field_override)
{
    if (!doc.is_object())
        throw DocumentError("algebra document must be a JSON object");
    for (const char* key : {"field", "basis", "mul"})
        if (!doc.contains(key))
            throw DocumentError(std::string("algebra: missing field '") + key + "'");
    Field field = field_override ? *field_override : parse_field(doc.at("field"));
    if (!doc.at("basis").is_array())
        throw DocumentError("algebra: 'basis' must be an array of names");
    std::vector<std::string> basis;
    for (const auto& b : doc.at("basis")) {
        if (!b.is_string())
            throw DocumentError("algebra: basis names must be strings");
        basis.push_back(b.get<std::string>());
    }
    const std::size_t d = basis.size();
    const auto& table = doc.at("mul");
    if (!table.is_array() || table.size() != d)
        throw DocumentError("algebra: 'mul' must be a " + std::to_string(d) + "x" + std::to_string(d) + " array");
    std::vector<std::vector<Vector>> mul(d, std::vector<Vector>(d));
    for (std::size_t i = 0; i < d; ++i) {
        if (!table[i].is_array() || table[i].size() != d)
            throw DocumentError("algebra: 'mul' row " + std::to_string(i) + " must have " + std::to_string(d) + " entries");
        for (std::size_t j = 0; j < d; ++j) {
            const auto& v = table[i][j];
            if (!v.is_array() || v.size() != d)
                throw DocumentError("algebra: mul[" + std::to_string(i) + "][" + std::to_string(j) +
                                   "] must be a coordinate array of length " + std::to_string(d));
            for (const auto& x : v)
                mul[i][j].push_back(parse_scalar<AlgebraError>(field, x));
        }
    }
    return Algebra(field, std::move(basis), std::move(mul));
}

json algebra_to_json(const Algebra& alg)
{
    json table = json::array();
    for (std::size_t i = 0; i < alg.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < alg.dim(); ++j) {
            json v = json::array();
            for (const auto& x : alg.product(i, j))
                v.push_back(scalar_to_json(x));
            row.push_back(v);
        }
        table.push_back(row);
    }
    return {{"field", field_to_json(alg.field())}, {"basis", alg.basis()}, {"mul", table}};
}

// ---------------------------------------------------------------------------

void validate_module(const Algebra& alg, const MultiModule& module)
{
    const auto d = alg.dim();
    const auto m = module.dim;
    const auto& field = alg.field();
    auto id = Matrix::identity(field, m);
    for (const auto& [key, mats] : module.actions) {
        if (mats.size() != d)
            throw ModuleError("action '" + key + "' needs " + std::to_string(d) + " matrices, got " +
                              std::to_string(mats.size()));
        for (const auto& a : mats)
            if (a.rows() != m || a.cols() != m || !(a.field() == field))
                throw ModuleError("action '" + key + "' has a matrix of the wrong shape or field");
        if (!(mats[0] == id))
            throw ModuleError("action '" + key + "' is not unital: the unit does not act as the identity");
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (!(mats[i] * mats[j] == act(module, alg, key, alg.product(i, j))))
                    throw ModuleError("action '" + key + "' is not multiplicative on (" + alg.basis()[i] + ", " +
                                      alg.basis()[j] + ")");
    }
    for (auto a = module.actions.begin(); a != module.actions.end(); ++a)
        for (auto b = std::next(a); b != module.actions.end(); ++b)
            for (std::size_t i = 1; i < d; ++i)
                for (std::size_t j = 1; j < d; ++j)
                    if (!(a->second[i] * b->second[j] == b->second[j] * a->second[i]))
                        throw ModuleError("actions '" + a->first + "' and '" + b->first + "' do not commute: " +
                                          alg.basis()[i] + " under '" + a->first + "' vs " + alg.basis()[j] +
                                          " under '" + b->first + "'");
}

MultiModule parse_module(const json& doc, const Algebra& alg, const actions::ActionPartition& partition,
                         bool override_slots)
{
    if (!doc.is_object() || !doc.contains("dim") || !doc.contains("actions"))
        throw DocumentError("module document needs 'dim' and 'actions'");
    if (!doc.at("dim").is_number_unsigned())
        throw DocumentError("module: 'dim' must be a natural number");
    if (!doc.at("actions").is_object())
        throw DocumentError("module: 'actions' must be an object keyed by class id");
    MultiModule module;
    module.dim = doc.at("dim").get<std::size_t>();

    std::set<std::string> expected;
    if (override_slots)
        expected.insert(partition.slots.begin(), partition.slots.end());
    else
        for (const auto& c : partition.classes)
            expected.insert(c.id);
    std::set<std::string> given;
    for (const auto& [key, _] : doc.at("actions").items())
        given.insert(key);
    for (const auto& k : expected)
        if (!given.count(k))
            throw ModuleError("class-id mismatch: module has no action for '" + k + "'");
    for (const auto& k : given)
        if (!expected.count(k))
            throw ModuleError("class-id mismatch: module supplies '" + k + "', which is not a " +
                              (override_slots ? "slot" : "class") + " of this space");

    for (const auto& [key, mats] : doc.at("actions").items()) {
        if (!mats.is_array() || mats.size() != alg.dim())
            throw DocumentError("action '" + key + "' needs " + std::to_string(alg.dim()) + " matrices");
        auto& out = module.actions[key];
        for (std::size_t t = 0; t < mats.size(); ++t)
            out.push_back(parse_matrix(alg.field(), mats[t], module.dim,
                                       "action '" + key + "', basis element '" + alg.basis()[t] + "'"));
    }
    validate_module(alg, module);
    return module;
}

json module_to_json(const MultiModule& module, const Algebra&)
{
    json acts = json::object();
    for (const auto& [key, mats] : module.actions) {
        json list = json::array();
        for (const auto& m : mats)
            list.push_back(matrix_to_json(m));
        acts[key] = list;
    }
    return {{"dim", module.dim}, {"actions", acts}};
}

Matrix act(const MultiModule& module, const Algebra& alg, const std::string& key, const Vector& a)
{
    auto it = module.actions.find(key);
    if (it == module.actions.end())
        throw ModuleError("unknown action class '" + key + "'");
    if (a.size() != alg.dim())
        throw ModuleError("algebra element has wrong length");
    Matrix out = Matrix::zero(alg.field(), module.dim, module.dim);
    for (std::size_t t = 0; t < a.size(); ++t)
        if (a[t] != 0)
            out = out + it->second[t].scaled(a[t]);
    return out;
}

std::vector<Matrix> regular_action(const Algebra& alg)
{
    std::vector<Matrix> out;
    for (std::size_t t = 0; t < alg.dim(); ++t)
        out.push_back(alg.left_multiplication(t));
    return out;
}

std::vector<Matrix> twisted_action(const Algebra& alg, const std::vector<Vector>& phi)
{
    if (phi.size() != alg.dim())
        throw AlgebraError("automorphism needs one image per basis element");
    if (phi[0] != alg.unit())
        throw AlgebraError("automorphism must fix the unit");
    for (std::size_t i = 0; i < alg.dim(); ++i)
        for (std::size_t j = 0; j < alg.dim(); ++j) {
            Vector img(alg.dim());
            const auto& p = alg.product(i, j);
            for (std::size_t t = 0; t < alg.dim(); ++t)
                for (std::size_t u = 0; u < alg.dim(); ++u)
                    img[u] += p[t] * phi[t][u];
            for (auto& x : img)
                x = alg.field().reduce(x);
            if (img != alg.multiply(phi[i], phi[j]))
                throw AlgebraError("twist is not multiplicative on (" + alg.basis()[i] + ", " + alg.basis()[j] + ")");
        }
    auto reg = regular_action(alg);
    std::vector<Matrix> out;
    for (std::size_t t = 0; t < alg.dim(); ++t) {
        Matrix m = Matrix::zero(alg.field(), alg.dim(), alg.dim());
        for (std::size_t u = 0; u < alg.dim(); ++u)
            if (phi[t][u] != 0)
                m = m + reg[u].scaled(phi[t][u]);
        out.push_back(m);
    }
    return out;
}

MultiModule uniform_module(const std::vector<std::string>& keys, const std::vector<Matrix>& action)
{
    MultiModule m;
    m.dim = action.empty() ? 0 : action.front().rows();
    for (const auto& k : keys)
        m.actions[k] = action;
    return m;
}

namespace {

void check_left_module(const Algebra& alg, const std::vector<Matrix>& rho)
{
    if (rho.empty())
        throw ModuleError("module action needs one matrix per basis element");
    MultiModule probe;
    probe.dim = rho.front().rows();
    probe.actions["M"] = rho;
    validate_module(alg, probe);
}

// Post- (left) or pre- (right) composition by rho(e_t) on End_k(M), m^2 x m^2.
std::vector<Matrix> composition_action(const Algebra& alg, const std::vector<Matrix>& rho, bool post)
{
    const std::size_t m = rho.front().rows();
    std::vector<Matrix> out;
    for (const auto& r : rho) {
        std::vector<linalg::SparseRow> rows(m * m);
        for (std::size_t a = 0; a < m; ++a)
            for (const auto& e : r.row(a))
                for (std::size_t s = 0; s < m; ++s) {
                    if (post)
                        // (rho f)_{a s} = sum_k rho_{a k} f_{k s}
                        rows[a * m + s].push_back({e.col * m + s, e.value});
                    else
                        // (f rho)_{s c} = sum_k f_{s k} rho_{k c}, here k = a, c = e.col
                        rows[s * m + e.col].push_back({s * m + a, e.value});
                }
        out.emplace_back(alg.field(), m * m, m * m, std::move(rows));
    }
    return out;
}

} // namespace

MultiModule endomorphism_bimodule(const Algebra& alg, const std::vector<Matrix>& rho, const std::string& left_id,
                                  const std::string& right_id)
{
    check_left_module(alg, rho);
    if (left_id == right_id)
        throw ModuleError("End_k(M) needs two distinct class ids");
    MultiModule out;
    out.dim = rho.front().rows() * rho.front().rows();
    out.actions[left_id] = composition_action(alg, rho, true);
    out.actions[right_id] = composition_action(alg, rho, false);
    validate_module(alg, out);
    return out;
}

MultiModule endomorphism_left_module(const Algebra& alg, const std::vector<Matrix>& rho, const std::string& id)
{
    check_left_module(alg, rho);
    MultiModule out;
    out.dim = rho.front().rows() * rho.front().rows();
    out.actions[id] = composition_action(alg, rho, true);
    validate_module(alg, out);
    return out;
}

const std::string& CoefficientAssignment::key_for(const std::string& slot) const
{
    if (override_slots) {
        auto it = module.actions.find(slot);
        if (it == module.actions.end())
            throw ModuleError("override module has no action for slot '" + slot + "'");
        return it->first;
    }
    return partition.class_of(slot);
}

CoefficientAssignment make_assignment(actions::ActionPartition partition, MultiModule module, bool override_slots)
{
    std::set<std::string> expected;
    if (override_slots)
        expected.insert(partition.slots.begin(), partition.slots.end());
    else
        for (const auto& c : partition.classes)
            expected.insert(c.id);
    std::set<std::string> given;
    for (const auto& [k, _] : module.actions)
        given.insert(k);
    if (expected != given)
        throw ModuleError("module keys do not match the " + std::string(override_slots ? "slot ids" : "class ids") +
                          " of the partition");
    return CoefficientAssignment{std::move(partition), std::move(module), override_slots};
}

} // namespace hhx::coeffalg
