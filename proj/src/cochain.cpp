#include "hhx/cochain.hpp"

#include "hhx/actions.hpp"

#include <algorithm>
#include <limits>

namespace hhx::cochain {

using linalg::Scalar;
using linalg::SparseRow;
using nlohmann::json;

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b)
{
    if (a == 0 || b == 0)
        return 0;
    if (a > std::numeric_limits<std::uint64_t>::max() / b)
        return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

} // namespace

BudgetExceeded::BudgetExceeded(std::uint32_t deg, std::uint64_t dim, std::uint64_t budget)
    : CochainError("hom-space in degree " + std::to_string(deg) + " has dimension " +
                   (dim == std::numeric_limits<std::uint64_t>::max() ? std::string(">= 2^64") : std::to_string(dim)) +
                   ", above the budget of " + std::to_string(budget)),
      degree(deg), dimension(dim)
{
}

bool IdentityReport::fails(const std::string& relation) const
{
    return std::any_of(failures.begin(), failures.end(), [&](const auto& f) { return f.relation == relation; });
}

CosimplicialModule::CosimplicialModule(CochainSetup setup) : setup_(std::move(setup))
{
    if (setup_.max_degree < 1)
        throw CochainError("max degree must be at least 1");
    if (!(setup_.assignment.partition == actions::sweep_closure(setup_.space)))
        throw CochainError("action partition was not computed from space '" + setup_.space.name() + "'");
    for (const auto& [key, mats] : setup_.assignment.module.actions)
        for (const auto& a : mats)
            if (!(a.field() == setup_.algebra.field()))
                throw CochainError("action '" + key + "' is over a different field than the algebra");
    for (std::uint32_t n = 0; n <= setup_.max_degree + 1; ++n) {
        Degree deg;
        deg.simplices = simplicial::non_basepoint_simplices(setup_.space, n);
        for (std::size_t k = 0; k < deg.simplices.size(); ++k)
            deg.position.emplace(std::make_pair(deg.simplices[k].base, deg.simplices[k].word), k);
        degrees_.push_back(std::move(deg));
    }
}

void CosimplicialModule::require_range(std::uint32_t n) const
{
    if (n > setup_.max_degree + 1)
        throw CochainError("degree " + std::to_string(n) + " outside 0.." + std::to_string(setup_.max_degree + 1));
}

const CosimplicialModule::Degree& CosimplicialModule::degree(std::uint32_t n) const
{
    require_range(n);
    return degrees_[n];
}

std::size_t CosimplicialModule::t(std::uint32_t n) const
{
    return degree(n).simplices.size();
}

std::uint64_t CosimplicialModule::hom_dimension(std::uint32_t n) const
{
    std::uint64_t dim = setup_.assignment.module.dim;
    const std::uint64_t d = setup_.algebra.dim();
    for (std::size_t k = 0; k < t(n); ++k)
        dim = saturating_mul(dim, d);
    return dim;
}

void CosimplicialModule::require_budget(std::uint32_t n) const
{
    auto dim = hom_dimension(n);
    if (dim > setup_.budget)
        throw BudgetExceeded(n, dim, setup_.budget);
}

long CosimplicialModule::locate(std::uint32_t n, const Simplex& s) const
{
    if (setup_.space.is_basepoint(s))
        return -1;
    const auto& deg = degree(n);
    auto it = deg.position.find(std::make_pair(s.base, s.word));
    if (it == deg.position.end())
        throw CochainError("simplex " + setup_.space.render(s) + " missing from degree " + std::to_string(n));
    return static_cast<long>(it->second);
}

Matrix CosimplicialModule::coface_matrix(std::uint32_t n, std::uint32_t i) const
{
    if (i > n + 1)
        throw CochainError("coface index " + std::to_string(i) + " out of range in degree " + std::to_string(n));
    require_range(n + 1);
    require_budget(n);
    require_budget(n + 1);

    const auto& space = setup_.space;
    const auto& alg = setup_.algebra;
    const auto& field = alg.field();
    const auto& module = setup_.assignment.module;
    const std::size_t d = alg.dim();
    const std::size_t m = module.dim;
    const auto& targets = degree(n + 1).simplices;
    const std::size_t t_src = t(n);
    const std::size_t t_tgt = targets.size();
    const std::size_t rows = hom_dimension(n + 1);
    const std::size_t cols = hom_dimension(n);
    if (m == 0)
        return Matrix::zero(field, rows, cols);

    // For each target simplex: where d_i sends it, or which action it carries.
    std::vector<std::string> keys;
    for (const auto& [key, _] : module.actions)
        keys.push_back(key);
    std::vector<long> face_pos(t_tgt);
    std::vector<std::size_t> key_of(t_tgt, 0);
    for (std::size_t s = 0; s < t_tgt; ++s) {
        auto face = simplicial::apply_face(space, targets[s], i);
        face_pos[s] = locate(n, face);
        if (face_pos[s] < 0) {
            auto slot = actions::reduce_slot(space, targets[s], i);
            const auto& key = setup_.assignment.key_for(actions::slot_id(space, slot));
            key_of[s] = static_cast<std::size_t>(std::find(keys.begin(), keys.end(), key) - keys.begin());
        }
    }

    // Composites of commuting actions, keyed by the sorted (key, basis) list.
    std::map<std::vector<std::size_t>, Matrix> composites;
    auto composite = [&](std::vector<std::size_t> factors) -> const Matrix& {
        std::sort(factors.begin(), factors.end());
        auto it = composites.find(factors);
        if (it != composites.end())
            return it->second;
        Matrix acc = Matrix::identity(field, m);
        for (auto f : factors)
            acc = acc * module.actions.at(keys[f / d])[f % d];
        return composites.emplace(std::move(factors), std::move(acc)).first->second;
    };

    std::vector<SparseRow> data(rows);
    std::vector<std::size_t> digits(t_tgt);
    std::vector<coeffalg::Vector> grouped(t_src);
    std::vector<std::size_t> factors;
    std::vector<std::pair<std::size_t, Scalar>> expansion, next;
    const std::size_t tensors = rows / m;
    for (std::size_t tensor = 0; tensor < tensors; ++tensor) {
        for (std::size_t p = t_tgt, rest = tensor; p-- > 0; rest /= d)
            digits[p] = rest % d;

        factors.clear();
        for (auto& g : grouped)
            g.clear();
        for (std::size_t s = 0; s < t_tgt; ++s) {
            if (face_pos[s] < 0) {
                if (digits[s] != 0)
                    factors.push_back(key_of[s] * d + digits[s]);
                continue;
            }
            auto& g = grouped[face_pos[s]];
            g = g.empty() ? alg.basis_vector(digits[s]) : alg.multiply(g, alg.basis_vector(digits[s]));
        }

        // Expand the tensor of grouped products into source basis tensors.
        expansion.assign(1, {0, Scalar(1)});
        for (std::size_t p = 0; p < t_src && !expansion.empty(); ++p) {
            const auto& v = grouped[p].empty() ? alg.unit() : grouped[p];
            next.clear();
            for (const auto& [idx, c] : expansion)
                for (std::size_t u = 0; u < d; ++u)
                    if (v[u] != 0)
                        next.emplace_back(idx * d + u, field.mul(c, v[u]));
            expansion.swap(next);
        }
        if (expansion.empty())
            continue;

        const Matrix& act = composite(factors);
        for (std::size_t kp = 0; kp < m; ++kp) {
            auto& row = data[tensor * m + kp];
            for (const auto& [src, c] : expansion)
                for (const auto& e : act.row(kp))
                    row.push_back({src * m + e.col, c * e.value});
        }
    }
    return Matrix(field, rows, cols, std::move(data));
}

Matrix CosimplicialModule::codegeneracy_matrix(std::uint32_t n, std::uint32_t i) const
{
    if (i > n)
        throw CochainError("codegeneracy index " + std::to_string(i) + " out of range in degree " + std::to_string(n));
    require_range(n + 1);
    require_budget(n);
    require_budget(n + 1);

    const auto& field = setup_.algebra.field();
    const std::size_t d = setup_.algebra.dim();
    const std::size_t m = setup_.assignment.module.dim;
    const auto& sources = degree(n).simplices;
    const std::size_t t_src = sources.size();
    const std::size_t t_tgt = t(n + 1);
    const std::size_t rows = hom_dimension(n);
    const std::size_t cols = hom_dimension(n + 1);
    if (m == 0)
        return Matrix::zero(field, rows, cols);

    // s_i is injective on non-basepoint simplices; everything outside its
    // image gets the unit (digit 0).
    std::vector<std::size_t> image(t_src);
    for (std::size_t s = 0; s < t_src; ++s) {
        auto pos = locate(n + 1, simplicial::apply_degeneracy(setup_.space, sources[s], i));
        if (pos < 0)
            throw CochainError("degeneracy of a non-basepoint simplex hit the basepoint");
        image[s] = static_cast<std::size_t>(pos);
    }
    std::vector<std::size_t> weight(t_tgt, 1);
    for (std::size_t p = t_tgt; p-- > 1;)
        weight[p - 1] = weight[p] * d;

    std::vector<SparseRow> data(rows);
    const std::size_t tensors = rows / m;
    for (std::size_t tensor = 0; tensor < tensors; ++tensor) {
        std::size_t target = 0;
        for (std::size_t p = t_src, rest = tensor; p-- > 0; rest /= d)
            target += (rest % d) * weight[image[p]];
        for (std::size_t k = 0; k < m; ++k)
            data[tensor * m + k].push_back({target * m + k, Scalar(1)});
    }
    return Matrix(field, rows, cols, std::move(data));
}

Matrix CosimplicialModule::differential(std::uint32_t n) const
{
    if (n > setup_.max_degree)
        throw CochainError("differential degree " + std::to_string(n) + " above max degree " +
                           std::to_string(setup_.max_degree));
    Matrix out = coface_matrix(n, 0);
    for (std::uint32_t i = 1; i <= n + 1; ++i) {
        auto c = coface_matrix(n, i);
        out = (i % 2) ? out - c : out + c;
    }
    return out;
}

IdentityReport CosimplicialModule::check_cosimplicial_identities(std::optional<std::uint32_t> max_hom_degree) const
{
    const std::uint32_t top = max_hom_degree.value_or(setup_.max_degree + 1);
    require_range(top);
    for (std::uint32_t n = 0; n <= top; ++n)
        require_budget(n);

    std::map<std::pair<std::uint32_t, std::uint32_t>, Matrix> cofaces, codegens;
    auto D = [&](std::uint32_t n, std::uint32_t i) -> const Matrix& {
        auto key = std::make_pair(n, i);
        auto it = cofaces.find(key);
        if (it == cofaces.end())
            it = cofaces.emplace(key, coface_matrix(n, i)).first;
        return it->second;
    };
    auto S = [&](std::uint32_t n, std::uint32_t i) -> const Matrix& {
        auto key = std::make_pair(n, i);
        auto it = codegens.find(key);
        if (it == codegens.end())
            it = codegens.emplace(key, codegeneracy_matrix(n, i)).first;
        return it->second;
    };

    IdentityReport report;
    auto record = [&](bool ok, const char* rel, std::uint32_t n, std::uint32_t i, std::uint32_t j) {
        ++report.checked;
        if (!ok)
            report.failures.push_back({rel, n, i, j});
    };

    // a) d^j d^i = d^i d^{j-1}, i < j, out of degree n.
    for (std::uint32_t n = 0; n + 2 <= top; ++n)
        for (std::uint32_t j = 1; j <= n + 2; ++j)
            for (std::uint32_t i = 0; i < j; ++i)
                record(D(n + 1, j) * D(n, i) == D(n + 1, i) * D(n, j - 1), "a", n, i, j);

    // b) s^j s^i = s^{i-1} s^j, i > j, out of degree n+2.
    for (std::uint32_t n = 0; n + 2 <= top; ++n)
        for (std::uint32_t i = 1; i <= n + 1; ++i)
            for (std::uint32_t j = 0; j < i; ++j)
                record(S(n, j) * S(n + 1, i) == S(n, i - 1) * S(n + 1, j), "b", n, i, j);

    // c) s^j d^i, out of degree n.
    for (std::uint32_t n = 0; n + 1 <= top; ++n)
        for (std::uint32_t j = 0; j <= n; ++j)
            for (std::uint32_t i = 0; i <= n + 1; ++i) {
                Matrix lhs = S(n, j) * D(n, i);
                if (i == j || i == j + 1)
                    record(lhs == Matrix::identity(setup_.algebra.field(), hom_dimension(n)), "c", n, i, j);
                else if (i < j)
                    record(lhs == D(n - 1, i) * S(n - 1, j - 1), "c", n, i, j);
                else
                    record(lhs == D(n - 1, i - 1) * S(n - 1, j), "c", n, i, j);
            }

    for (std::uint32_t n = 0; n + 2 <= top && n + 1 <= setup_.max_degree; ++n)
        record((differential(n + 1) * differential(n)).is_zero(), "dd", n, 0, 0);
    return report;
}

std::vector<std::size_t> CosimplicialModule::cohomology_dims() const
{
    const auto N = setup_.max_degree;
    for (std::uint32_t n = 0; n <= N + 1; ++n)
        require_budget(n);
    std::vector<std::size_t> ranks;
    for (std::uint32_t n = 0; n <= N; ++n)
        ranks.push_back(linalg::rank(differential(n)));
    std::vector<std::size_t> hh;
    for (std::uint32_t n = 0; n <= N; ++n) {
        long long kernel = static_cast<long long>(hom_dimension(n)) - static_cast<long long>(ranks[n]);
        long long image = n == 0 ? 0 : static_cast<long long>(ranks[n - 1]);
        if (kernel - image < 0)
            throw CochainError("negative cohomology dimension in degree " + std::to_string(n) +
                               ": image exceeds kernel, the complex is inconsistent");
        hh.push_back(static_cast<std::size_t>(kernel - image));
    }
    return hh;
}

json report_to_json(const CosimplicialModule& cm, const IdentityReport& identities,
                    const std::optional<std::vector<std::size_t>>& hh_dims)
{
    json t = json::array(), hom = json::array();
    for (std::uint32_t n = 0; n <= cm.max_degree() + 1; ++n) {
        t.push_back(cm.t(n));
        hom.push_back(cm.hom_dimension(n));
    }
    json ident;
    if (identities.ok()) {
        ident = "pass";
    } else {
        ident = json::array();
        for (const auto& f : identities.failures)
            ident.push_back({{"relation", f.relation}, {"n", f.n}, {"i", f.i}, {"j", f.j}});
    }
    json out = {{"space", cm.setup().space.name()}, {"t", t}, {"hom_dims", hom}, {"identities", ident}};
    out["hh_dims"] = hh_dims ? json(*hh_dims) : json(nullptr);
    return out;
}

} // namespace hhx::cochain
