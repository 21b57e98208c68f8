#pragma once

// Finite pointed simplicial sets in Eilenberg-Zilber normal form.

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hhx::simplicial {

class SpaceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A simplex in normal form: degeneracy word applied to a non-degenerate
/// generator. The word (j1 > j2 > ... > jr) denotes s_{j1} o ... o s_{jr}(g),
/// so the last entry is applied first.
struct Simplex {
    std::vector<std::uint32_t> word;
    std::size_t base = 0;

    bool degenerate() const { return !word.empty(); }
    friend bool operator==(const Simplex&, const Simplex&) = default;
};

struct Generator {
    std::string name;
    std::uint32_t dim = 0;
    std::vector<Simplex> faces; // d_0 .. d_dim, empty when dim = 0
};

class SimplicialSpace {
public:
    SimplicialSpace(std::string name, std::vector<Generator> generators, std::size_t basepoint);

    const std::string& name() const { return name_; }
    const std::vector<Generator>& generators() const { return generators_; }
    const Generator& generator(std::size_t idx) const { return generators_.at(idx); }
    std::size_t basepoint() const { return basepoint_; }
    std::optional<std::size_t> find(const std::string& name) const;
    std::uint32_t max_dim() const;

    std::uint32_t dim(const Simplex& s) const;
    bool is_basepoint(const Simplex& s) const { return s.base == basepoint_; }
    /// The basepoint in dimension n, i.e. s_{n-1} ... s_0 (*).
    Simplex basepoint_simplex(std::uint32_t n) const;

    /// "word.name" style rendering, e.g. "s1s0.pt" or "e".
    std::string render(const Simplex& s) const;

private:
    std::string name_;
    std::vector<Generator> generators_;
    std::size_t basepoint_;
};

bool is_normal_word(const std::vector<std::uint32_t>& word, std::uint32_t base_dim);

Simplex apply_face(const SimplicialSpace& space, const Simplex& s, std::uint32_t i);
Simplex apply_degeneracy(const SimplicialSpace& space, const Simplex& s, std::uint32_t i);

/// All n-simplices, sorted by (generator name, word).
std::vector<Simplex> enumerate_simplices(const SimplicialSpace& space, std::uint32_t n);
/// Same ordering with the basepoint simplex dropped.
std::vector<Simplex> non_basepoint_simplices(const SimplicialSpace& space, std::uint32_t n);

struct IdentityViolation {
    std::string generator;
    std::uint32_t i;
    std::uint32_t j;
    std::string lhs; // d_i d_j g
    std::string rhs; // d_{j-1} d_i g
};

struct ValidationReport {
    std::vector<IdentityViolation> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_space(const SimplicialSpace& space);

/// Parses and validates. Identity violations raise SpaceError too; use
/// parse_space_unchecked to get hold of an invalid space for reporting.
SimplicialSpace parse_space(const nlohmann::json& doc);
SimplicialSpace parse_space_unchecked(const nlohmann::json& doc);
nlohmann::json space_to_json(const SimplicialSpace& space);

/// circle, sphere<n> / sphere(n), torus, pinched-torus.
SimplicialSpace builtin_space(const std::string& name);
SimplicialSpace sphere(std::uint32_t n);

} // namespace hhx::simplicial
