#pragma once

// The cosimplicial vector space attached to a pointed simplicial set, a
// commutative algebra and a multi-module, as explicit sparse matrices.
//
// Degree n is Hom_k(A^{(x) t_n}, M) where t_n counts the non-basepoint
// n-simplices. A basis vector is a pair (tensor, k): the tensor assigns an
// algebra basis index to every non-basepoint n-simplex (first simplex in
// canonical order is the most significant digit) and k indexes a basis
// vector of M. The flat index is tensor * m + k.

#include "hhx/coeffalg.hpp"
#include "hhx/simplicial.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hhx::cochain {

using coeffalg::Algebra;
using coeffalg::CoefficientAssignment;
using linalg::Matrix;
using simplicial::Simplex;
using simplicial::SimplicialSpace;

inline constexpr std::uint64_t kDefaultBudget = 200000;

class CochainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A hom-space in the requested range is larger than the column budget.
class BudgetExceeded : public CochainError {
public:
    BudgetExceeded(std::uint32_t degree, std::uint64_t dimension, std::uint64_t budget);
    std::uint32_t degree;
    std::uint64_t dimension;
};

struct CochainSetup {
    SimplicialSpace space;
    Algebra algebra;
    CoefficientAssignment assignment;
    std::uint32_t max_degree = 1;
    std::uint64_t budget = kDefaultBudget;
};

struct IdentityFailure {
    std::string relation; // "a", "b", "c" or "dd"
    std::uint32_t n;
    std::uint32_t i;
    std::uint32_t j;
};

struct IdentityReport {
    std::vector<IdentityFailure> failures;
    std::size_t checked = 0;
    bool ok() const { return failures.empty(); }
    bool fails(const std::string& relation) const;
};

class CosimplicialModule {
public:
    /// Requires max_degree >= 1 and a partition that matches the space.
    explicit CosimplicialModule(CochainSetup setup);

    const CochainSetup& setup() const { return setup_; }
    std::uint32_t max_degree() const { return setup_.max_degree; }

    /// Number of non-basepoint n-simplices.
    std::size_t t(std::uint32_t n) const;
    /// m * d^{t_n}, saturating at UINT64_MAX. Valid for 0 <= n <= N+1.
    std::uint64_t hom_dimension(std::uint32_t n) const;

    /// d^i : (M,X)^n -> (M,X)^{n+1}, 0 <= i <= n+1.
    Matrix coface_matrix(std::uint32_t n, std::uint32_t i) const;
    /// s^i : (M,X)^{n+1} -> (M,X)^n, 0 <= i <= n.
    Matrix codegeneracy_matrix(std::uint32_t n, std::uint32_t i) const;
    /// Alternating sum of the cofaces out of degree n, n <= N.
    Matrix differential(std::uint32_t n) const;

    /// Checks every cosimplicial identity instance whose hom-spaces lie in
    /// degrees <= max_hom_degree (default N+1), plus delta o delta = 0.
    IdentityReport check_cosimplicial_identities(std::optional<std::uint32_t> max_hom_degree = std::nullopt) const;

    /// HH^0 .. HH^N.
    std::vector<std::size_t> cohomology_dims() const;

    /// Throws BudgetExceeded if degree n is over budget.
    void require_budget(std::uint32_t n) const;

private:
    struct Degree {
        std::vector<Simplex> simplices; // non-basepoint, canonical order
        std::map<std::pair<std::size_t, std::vector<std::uint32_t>>, std::size_t> position;
    };

    const Degree& degree(std::uint32_t n) const;
    void require_range(std::uint32_t n) const;
    /// -1 for the basepoint.
    long locate(std::uint32_t n, const Simplex& s) const;

    CochainSetup setup_;
    std::vector<Degree> degrees_; // 0 .. N+1
};

/// Independent classical Hochschild cochain complex C^n = Hom(A^{(x)n}, M)
/// of a bimodule, left action left_id and right action right_id. Returns
/// HH^0 .. HH^N.
std::vector<std::size_t> classical_oracle(const Algebra& alg, const coeffalg::MultiModule& bimodule,
                                          const std::string& left_id, const std::string& right_id, std::uint32_t max_degree);

nlohmann::json report_to_json(const CosimplicialModule& cm, const IdentityReport& identities,
                              const std::optional<std::vector<std::size_t>>& hh_dims);

} // namespace hhx::cochain
