#include "hhx/actions.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace hhx::actions {

using nlohmann::json;
using simplicial::apply_face;

std::string slot_id(const SimplicialSpace& space, const ActionSlot& slot)
{
    return space.generator(slot.generator).name + "." + std::to_string(slot.index);
}

bool slot_less(const SimplicialSpace& space, const ActionSlot& a, const ActionSlot& b)
{
    const auto& na = space.generator(a.generator).name;
    const auto& nb = space.generator(b.generator).name;
    return std::tie(na, a.index) < std::tie(nb, b.index);
}

std::string slot_direction(const SimplicialSpace& space, const ActionSlot& slot)
{
    if (space.generator(slot.generator).dim != 1)
        return {};
    return slot.index == 0 ? "forward" : "backward";
}

const std::string& ActionPartition::class_of(const std::string& slot) const
{
    auto it = lookup.find(slot);
    if (it == lookup.end())
        throw ActionError("unknown action slot '" + slot + "'");
    return it->second;
}

std::string ActionPartition::coefficient_kind() const
{
    switch (classes.size()) {
    case 1:
        return "uni-module";
    case 2:
        return "bi-module";
    default:
        return std::to_string(classes.size()) + "-multi-module";
    }
}

std::vector<ActionSlot> enumerate_slots(const SimplicialSpace& space)
{
    std::vector<ActionSlot> slots;
    for (std::size_t g = 0; g < space.generators().size(); ++g) {
        const auto& gen = space.generator(g);
        if (g == space.basepoint() || gen.dim == 0)
            continue;
        for (std::uint32_t i = 0; i <= gen.dim; ++i)
            if (space.is_basepoint(gen.faces[i]))
                slots.push_back({g, i});
    }
    std::sort(slots.begin(), slots.end(), [&](const auto& a, const auto& b) { return slot_less(space, a, b); });
    return slots;
}

ActionSlot reduce_slot(const SimplicialSpace& space, const Simplex& s, std::uint32_t i)
{
    if (space.is_basepoint(s))
        throw ActionError("no action slot on the basepoint simplex " + space.render(s));
    auto d = space.dim(s);
    if (d == 0 || i > d)
        throw ActionError("slot index " + std::to_string(i) + " out of range for " + space.render(s));
    if (!space.is_basepoint(apply_face(space, s, i)))
        throw ActionError("face " + std::to_string(i) + " of " + space.render(s) + " is not the basepoint");

    // Peel s_j off the outside: below j the index is unchanged, above j+1 it
    // drops by one.
    for (auto j : s.word) {
        if (i < j)
            continue;
        if (i > j + 1) {
            --i;
            continue;
        }
        throw ActionError("slot (" + space.render(s) + ", " + std::to_string(i) + ") lands on the collapsed pair of s" +
                          std::to_string(j));
    }
    return ActionSlot{s.base, i};
}

std::vector<Unification> sweep_rules(const SimplicialSpace& space, const Simplex& sigma)
{
    std::vector<Unification> out;
    auto d = space.dim(sigma);
    if (d < 2 || space.is_basepoint(sigma))
        return out;
    std::vector<Simplex> faces;
    std::vector<bool> star;
    for (std::uint32_t k = 0; k <= d; ++k) {
        faces.push_back(apply_face(space, sigma, k));
        star.push_back(space.is_basepoint(faces.back()));
    }
    for (std::uint32_t j = 1; j <= d; ++j) {
        for (std::uint32_t i = 0; i < j; ++i) {
            if (star[i] && star[j]) {
                out.push_back({reduce_slot(space, sigma, i), reduce_slot(space, sigma, j), 'i'});
            } else if (!star[i] && star[j]) {
                out.push_back({reduce_slot(space, sigma, j), reduce_slot(space, faces[i], j - 1), '2'});
            } else if (star[i] && !star[j]) {
                out.push_back({reduce_slot(space, sigma, i), reduce_slot(space, faces[j], i), '4'});
            } else if (space.is_basepoint(apply_face(space, faces[j], i))) {
                if (!space.is_basepoint(apply_face(space, faces[i], j - 1)))
                    throw ActionError("simplicial identity fails on " + space.render(sigma) + " at (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
                out.push_back({reduce_slot(space, faces[j], i), reduce_slot(space, faces[i], j - 1), '3'});
            }
        }
    }
    return out;
}

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        parent_[std::max(a, b)] = std::min(a, b);
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

ActionPartition make_partition(std::vector<std::string> slots, std::vector<std::vector<std::string>> groups)
{
    ActionPartition p;
    p.slots = std::move(slots);
    for (auto& g : groups) {
        if (g.empty())
            continue;
        ActionClass c;
        c.id = g.front();
        c.members = std::move(g);
        p.classes.push_back(std::move(c));
    }
    std::sort(p.classes.begin(), p.classes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& c : p.classes)
        for (const auto& m : c.members)
            p.lookup[m] = c.id;
    return p;
}

} // namespace

ActionPartition close_partition(const SimplicialSpace& space, const std::vector<ActionSlot>& slots,
                                const std::vector<Unification>& unifications)
{
    auto position = [&](const ActionSlot& s) {
        auto it = std::find(slots.begin(), slots.end(), s);
        if (it == slots.end())
            throw ActionError("rule produced unknown slot " + slot_id(space, s));
        return static_cast<std::size_t>(it - slots.begin());
    };
    UnionFind uf(slots.size());
    for (const auto& u : unifications)
        uf.unite(position(u.left), position(u.right));

    // Slots are in canonical order and the representative is the smallest
    // position, so the first member of each group is its least element.
    std::vector<std::vector<std::string>> groups(slots.size());
    std::vector<std::string> ids;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        ids.push_back(slot_id(space, slots[k]));
        groups[uf.find(k)].push_back(ids.back());
    }
    return make_partition(std::move(ids), std::move(groups));
}

ActionPartition sweep_closure(const SimplicialSpace& space)
{
    auto slots = enumerate_slots(space);
    std::vector<Unification> rules;
    for (std::size_t g = 0; g < space.generators().size(); ++g) {
        auto more = sweep_rules(space, Simplex{{}, g});
        rules.insert(rules.end(), more.begin(), more.end());
    }
    return close_partition(space, slots, rules);
}

ActionPartition paranoid_closure(const SimplicialSpace& space, std::uint32_t dim_cap)
{
    if (dim_cap < space.max_dim() + 1)
        throw ActionError("paranoid cap " + std::to_string(dim_cap) + " must be at least max generator dimension + 1 = " +
                          std::to_string(space.max_dim() + 1));
    auto slots = enumerate_slots(space);
    std::vector<Unification> rules;
    for (std::uint32_t n = 1; n <= dim_cap; ++n) {
        for (const auto& s : simplicial::non_basepoint_simplices(space, n)) {
            // Every slot on a degenerate simplex must reduce to a known slot.
            for (std::uint32_t i = 0; i <= n; ++i)
                if (space.is_basepoint(apply_face(space, s, i))) {
                    auto r = reduce_slot(space, s, i);
                    rules.push_back({r, r, '='});
                }
            auto more = sweep_rules(space, s);
            rules.insert(rules.end(), more.begin(), more.end());
        }
    }
    return close_partition(space, slots, rules);
}

json partition_to_json(const ActionPartition& partition)
{
    json classes = json::array();
    for (const auto& c : partition.classes)
        classes.push_back({{"id", c.id}, {"members", c.members}});
    return {{"slots", partition.slots},
            {"classes", classes},
            {"class_count", partition.class_count()},
            {"coefficient_kind", partition.coefficient_kind()}};
}

ActionPartition partition_from_json(const json& doc)
{
    try {
        std::vector<std::vector<std::string>> groups;
        for (const auto& c : doc.at("classes")) {
            auto members = c.at("members").get<std::vector<std::string>>();
            if (members.empty() || members.front() != c.at("id").get<std::string>())
                throw ActionError("class id must be its first member");
            groups.push_back(std::move(members));
        }
        auto p = make_partition(doc.at("slots").get<std::vector<std::string>>(), std::move(groups));
        if (p.lookup.size() != p.slots.size())
            throw ActionError("classes do not cover the slot list");
        return p;
    } catch (const json::exception& e) {
        throw ActionError(std::string("malformed partition report: ") + e.what());
    }
}

} // namespace hhx::actions
