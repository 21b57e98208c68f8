#pragma once

// Structure-constant commutative algebras and their multi-modules.

#include "hhx/actions.hpp"
#include "hhx/linalg.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hhx::coeffalg {

using linalg::Field;
using linalg::Matrix;
using linalg::Scalar;
using Vector = std::vector<Scalar>;

/// Malformed algebra or module document (wrong shape, missing fields).
class DocumentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AlgebraError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ModuleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Finite-dimensional commutative unital algebra. Basis element 0 is the unit;
/// mul[i][j] holds the coordinates of e_i * e_j.
class Algebra {
public:
    /// Validates commutativity, associativity and the unit; throws AlgebraError
    /// naming the offending basis elements.
    Algebra(Field field, std::vector<std::string> basis, std::vector<std::vector<Vector>> mul);

    const Field& field() const { return field_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<std::string>& basis() const { return basis_; }
    const Vector& product(std::size_t i, std::size_t j) const { return mul_[i][j]; }

    Vector unit() const { return basis_vector(0); }
    Vector basis_vector(std::size_t t) const;
    Vector multiply(const Vector& a, const Vector& b) const;
    /// Matrix of a -> e_t * a in the basis.
    Matrix left_multiplication(std::size_t t) const;

private:
    Field field_;
    std::vector<std::string> basis_;
    std::vector<std::vector<Vector>> mul_;
};

/// The ground field as a 1-dimensional algebra.
Algebra ground_field(Field field);
/// k[x]/x^n with basis 1, x, ..., x^{n-1}.
Algebra truncated_polynomial(Field field, std::size_t n);

Algebra parse_algebra(const nlohmann::json& doc, std::optional<Field> field_override = std::nullopt);
nlohmann::json algebra_to_json(const Algebra& alg);

/// One action per key; actions[key][t] is the m x m matrix of e_t.
struct MultiModule {
    std::size_t dim = 0;
    std::map<std::string, std::vector<Matrix>> actions;
};

/// Checks unitality, multiplicativity and pairwise commutation of all keys.
void validate_module(const Algebra& alg, const MultiModule& module);

/// Parses a module keyed by the partition's class ids, or by slot ids when
/// override_slots is set (test mode, one action per slot).
MultiModule parse_module(const nlohmann::json& doc, const Algebra& alg, const actions::ActionPartition& partition,
                         bool override_slots = false);
nlohmann::json module_to_json(const MultiModule& module, const Algebra& alg);

Matrix act(const MultiModule& module, const Algebra& alg, const std::string& key, const Vector& a);

/// Action matrices of the regular module M = A.
std::vector<Matrix> regular_action(const Algebra& alg);
/// Regular action precomposed with an algebra automorphism phi, given as
/// the images phi(e_t).
std::vector<Matrix> twisted_action(const Algebra& alg, const std::vector<Vector>& phi);

/// Every key acts by the same matrices.
MultiModule uniform_module(const std::vector<std::string>& keys, const std::vector<Matrix>& action);

/// End_k(M) for a left A-module M given by rho. left_id acts by
/// post-composition, right_id by pre-composition. Basis of End_k(M) is the
/// matrix units E_{rs}, flattened row-major.
MultiModule endomorphism_bimodule(const Algebra& alg, const std::vector<Matrix>& rho, const std::string& left_id,
                                  const std::string& right_id);
/// The post-composition half of End_k(M) alone, for single-class spaces.
MultiModule endomorphism_left_module(const Algebra& alg, const std::vector<Matrix>& rho, const std::string& id);

/// A partition paired with a module keyed compatibly.
struct CoefficientAssignment {
    actions::ActionPartition partition;
    MultiModule module;
    bool override_slots = false;

    /// Key the module is looked up by for a given slot id.
    const std::string& key_for(const std::string& slot) const;
};

CoefficientAssignment make_assignment(actions::ActionPartition partition, MultiModule module,
                                      bool override_slots = false);

} // namespace hhx::coeffalg
