#pragma once

// Action slots and the equivalence closure that decides which multi-module
// structures a space admits as coefficients.

#include "hhx/simplicial.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hhx::actions {

using simplicial::Simplex;
using simplicial::SimplicialSpace;

class ActionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An action on a non-degenerate simplex pointing towards its basepoint face.
struct ActionSlot {
    std::size_t generator = 0;
    std::uint32_t index = 0;

    friend bool operator==(const ActionSlot&, const ActionSlot&) = default;
};

/// "name.index", the stable id used in module files.
std::string slot_id(const SimplicialSpace& space, const ActionSlot& slot);
/// Canonical order: generator name, then index.
bool slot_less(const SimplicialSpace& space, const ActionSlot& a, const ActionSlot& b);

struct ActionClass {
    std::string id;                    // least member
    std::vector<std::string> members;  // canonical order
};

struct ActionPartition {
    std::vector<std::string> slots;    // canonical order
    std::vector<ActionClass> classes;  // ordered by id

    std::size_t class_count() const { return classes.size(); }
    /// Class id for a slot id; throws on unknown slots.
    const std::string& class_of(const std::string& slot) const;
    std::string coefficient_kind() const;

    friend bool operator==(const ActionPartition& a, const ActionPartition& b)
    {
        if (a.slots != b.slots || a.classes.size() != b.classes.size())
            return false;
        for (std::size_t k = 0; k < a.classes.size(); ++k)
            if (a.classes[k].id != b.classes[k].id || a.classes[k].members != b.classes[k].members)
                return false;
        return true;
    }

    std::map<std::string, std::string> lookup; // slot id -> class id
};

std::vector<ActionSlot> enumerate_slots(const SimplicialSpace& space);

/// Moves an action on a degenerate simplex down to its generator.
ActionSlot reduce_slot(const SimplicialSpace& space, const Simplex& s, std::uint32_t i);

/// One application of the four sweep rules to (sigma, i, j), i < j.
struct Unification {
    ActionSlot left;
    ActionSlot right;
    char rule; // 'i' sweep around, '2' sweep out 1, '4' sweep out 2, '3' sweep across
};

/// Rule applications generated by a single simplex of dimension >= 2.
std::vector<Unification> sweep_rules(const SimplicialSpace& space, const Simplex& sigma);

ActionPartition sweep_closure(const SimplicialSpace& space);
/// Same closure over every simplex (degenerate included) of dim 2..dim_cap.
ActionPartition paranoid_closure(const SimplicialSpace& space, std::uint32_t dim_cap);

/// Closure from an explicit unification list; scan order is the list order.
ActionPartition close_partition(const SimplicialSpace& space, const std::vector<ActionSlot>& slots,
                                const std::vector<Unification>& unifications);

nlohmann::json partition_to_json(const ActionPartition& partition);
ActionPartition partition_from_json(const nlohmann::json& doc);

/// "forward"/"backward" for slots on 1-simplices, empty otherwise.
std::string slot_direction(const SimplicialSpace& space, const ActionSlot& slot);

} // namespace hhx::actions
