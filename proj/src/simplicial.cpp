#include "hhx/simplicial.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>

namespace hhx::simplicial {

using nlohmann::json;

SimplicialSpace::SimplicialSpace(std::string name, std::vector<Generator> generators, std::size_t basepoint)
    : name_(std::move(name)), generators_(std::move(generators)), basepoint_(basepoint)
{
    if (basepoint_ >= generators_.size() || generators_[basepoint_].dim != 0)
        throw SpaceError("basepoint must be a generator of dimension 0");
}

std::optional<std::size_t> SimplicialSpace::find(const std::string& name) const
{
    for (std::size_t k = 0; k < generators_.size(); ++k)
        if (generators_[k].name == name)
            return k;
    return std::nullopt;
}

std::uint32_t SimplicialSpace::max_dim() const
{
    std::uint32_t d = 0;
    for (const auto& g : generators_)
        d = std::max(d, g.dim);
    return d;
}

std::uint32_t SimplicialSpace::dim(const Simplex& s) const
{
    return generators_.at(s.base).dim + static_cast<std::uint32_t>(s.word.size());
}

Simplex SimplicialSpace::basepoint_simplex(std::uint32_t n) const
{
    Simplex s{{}, basepoint_};
    for (std::uint32_t k = n; k-- > 0;)
        s.word.push_back(k);
    return s;
}

std::string SimplicialSpace::render(const Simplex& s) const
{
    std::string out;
    for (auto j : s.word)
        out += "s" + std::to_string(j);
    if (!out.empty())
        out += ".";
    return out + generators_.at(s.base).name;
}

bool is_normal_word(const std::vector<std::uint32_t>& word, std::uint32_t base_dim)
{
    auto top = base_dim + static_cast<std::uint32_t>(word.size());
    for (std::size_t k = 0; k < word.size(); ++k) {
        if (word[k] >= top)
            return false;
        if (k > 0 && word[k] >= word[k - 1])
            return false;
    }
    return true;
}

Simplex apply_degeneracy(const SimplicialSpace& space, const Simplex& s, std::uint32_t i)
{
    auto d = space.dim(s);
    if (i > d)
        throw SpaceError("degeneracy index " + std::to_string(i) + " out of range for " + std::to_string(d) + "-simplex " +
                         space.render(s));
    // s_i s_j = s_{j+1} s_i for i <= j: push i rightwards past every j >= i.
    Simplex out{{}, s.base};
    out.word.reserve(s.word.size() + 1);
    std::size_t k = 0;
    for (; k < s.word.size() && i <= s.word[k]; ++k)
        out.word.push_back(s.word[k] + 1);
    out.word.push_back(i);
    for (; k < s.word.size(); ++k)
        out.word.push_back(s.word[k]);
    return out;
}

Simplex apply_face(const SimplicialSpace& space, const Simplex& s, std::uint32_t i)
{
    auto d = space.dim(s);
    if (d == 0 || i > d)
        throw SpaceError("face index " + std::to_string(i) + " out of range for " + std::to_string(d) + "-simplex " +
                         space.render(s));
    if (s.word.empty())
        return space.generator(s.base).faces.at(i);

    std::uint32_t j = s.word.front();
    Simplex rest{std::vector<std::uint32_t>(s.word.begin() + 1, s.word.end()), s.base};
    if (i < j)
        return apply_degeneracy(space, apply_face(space, rest, i), j - 1);
    if (i == j || i == j + 1)
        return rest;
    return apply_degeneracy(space, apply_face(space, rest, i - 1), j);
}

namespace {

// Strictly decreasing words of length r with entries < n, lexicographic.
void decreasing_words(std::uint32_t n, std::uint32_t r, std::vector<std::uint32_t>& prefix,
                      std::vector<std::vector<std::uint32_t>>& out)
{
    if (prefix.size() == r) {
        out.push_back(prefix);
        return;
    }
    auto remaining = r - static_cast<std::uint32_t>(prefix.size());
    std::uint32_t hi = prefix.empty() ? n : prefix.back();
    for (std::uint32_t j = remaining - 1; j < hi; ++j) {
        prefix.push_back(j);
        decreasing_words(n, r, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

std::vector<Simplex> enumerate_simplices(const SimplicialSpace& space, std::uint32_t n)
{
    std::vector<std::size_t> order(space.generators().size());
    for (std::size_t k = 0; k < order.size(); ++k)
        order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return space.generator(a).name < space.generator(b).name; });

    std::vector<Simplex> out;
    for (auto g : order) {
        const auto& gen = space.generator(g);
        if (gen.dim > n)
            continue;
        std::vector<std::vector<std::uint32_t>> words;
        std::vector<std::uint32_t> prefix;
        decreasing_words(n, n - gen.dim, prefix, words);
        for (auto& w : words)
            out.push_back(Simplex{std::move(w), g});
    }
    return out;
}

std::vector<Simplex> non_basepoint_simplices(const SimplicialSpace& space, std::uint32_t n)
{
    auto all = enumerate_simplices(space, n);
    std::erase_if(all, [&](const Simplex& s) { return space.is_basepoint(s); });
    return all;
}

ValidationReport validate_space(const SimplicialSpace& space)
{
    ValidationReport report;
    for (std::size_t g = 0; g < space.generators().size(); ++g) {
        const auto& gen = space.generator(g);
        if (gen.dim < 2)
            continue;
        Simplex s{{}, g};
        for (std::uint32_t j = 1; j <= gen.dim; ++j) {
            for (std::uint32_t i = 0; i < j; ++i) {
                auto lhs = apply_face(space, apply_face(space, s, j), i);
                auto rhs = apply_face(space, apply_face(space, s, i), j - 1);
                if (!(lhs == rhs))
                    report.violations.push_back({gen.name, i, j, space.render(lhs), space.render(rhs)});
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------

namespace {

const json& require(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key))
        throw SpaceError(where + ": missing field '" + key + "'");
    return obj.at(key);
}

} // namespace

SimplicialSpace parse_space_unchecked(const json& doc)
{
    if (!doc.is_object())
        throw SpaceError("space document must be a JSON object");
    std::string name = doc.value("name", std::string("unnamed"));
    const auto& bp = require(doc, "basepoint", "space");
    if (!bp.is_string())
        throw SpaceError("space: 'basepoint' must be a generator name");
    const auto& list = require(doc, "simplices", "space");
    if (!list.is_array())
        throw SpaceError("space: 'simplices' must be an array");

    std::vector<Generator> gens;
    std::map<std::string, std::size_t> index;
    for (const auto& item : list) {
        const auto& nm = require(item, "name", "simplex");
        const auto& dm = require(item, "dim", "simplex");
        if (!nm.is_string() || nm.get<std::string>().empty())
            throw SpaceError("simplex: 'name' must be a non-empty string");
        if (!dm.is_number_unsigned())
            throw SpaceError("simplex '" + nm.get<std::string>() + "': 'dim' must be a natural number");
        Generator g;
        g.name = nm.get<std::string>();
        g.dim = dm.get<std::uint32_t>();
        if (g.name.find('.') != std::string::npos)
            throw SpaceError("simplex name '" + g.name + "' must not contain '.'");
        if (!index.emplace(g.name, gens.size()).second)
            throw SpaceError("duplicate simplex name '" + g.name + "'");
        gens.push_back(std::move(g));
    }

    // Faces are resolved in a second pass so they may refer forward.
    for (std::size_t k = 0; k < gens.size(); ++k) {
        auto& g = gens[k];
        const auto& item = list[k];
        json faces = item.contains("faces") ? item.at("faces") : json::array();
        if (!faces.is_array())
            throw SpaceError("simplex '" + g.name + "': 'faces' must be an array");
        std::size_t expected = g.dim == 0 ? 0 : g.dim + 1;
        if (faces.size() != expected)
            throw SpaceError("simplex '" + g.name + "' of dim " + std::to_string(g.dim) + " needs " +
                             std::to_string(expected) + " faces, got " + std::to_string(faces.size()));
        for (std::size_t f = 0; f < faces.size(); ++f) {
            const auto& ref = faces[f];
            std::string where = "face " + std::to_string(f) + " of '" + g.name + "'";
            std::string target;
            std::vector<std::uint32_t> word;
            if (ref.is_string()) {
                target = ref.get<std::string>();
            } else if (ref.is_array() && !ref.empty() && ref.size() <= 2 && ref[0].is_string()) {
                target = ref[0].get<std::string>();
                if (ref.size() == 2) {
                    if (!ref[1].is_array())
                        throw SpaceError(where + ": degeneracy word must be an array");
                    for (const auto& j : ref[1]) {
                        if (!j.is_number_unsigned())
                            throw SpaceError(where + ": degeneracy word entries must be natural numbers");
                        word.push_back(j.get<std::uint32_t>());
                    }
                }
            } else {
                throw SpaceError(where + ": expected [generator-name, [word...]]");
            }
            auto it = index.find(target);
            if (it == index.end())
                throw SpaceError(where + ": unknown generator '" + target + "'");
            const auto& tg = gens[it->second];
            if (!is_normal_word(word, tg.dim))
                throw SpaceError(where + ": degeneracy word is not in normal form (strictly decreasing, in range)");
            if (tg.dim + word.size() != g.dim - 1)
                throw SpaceError(where + ": has dimension " + std::to_string(tg.dim + word.size()) + ", expected " +
                                 std::to_string(g.dim - 1));
            g.faces.push_back(Simplex{std::move(word), it->second});
        }
    }

    auto bp_it = index.find(bp.get<std::string>());
    if (bp_it == index.end())
        throw SpaceError("basepoint '" + bp.get<std::string>() + "' is not a listed simplex");
    if (gens[bp_it->second].dim != 0)
        throw SpaceError("basepoint '" + bp.get<std::string>() + "' must have dimension 0");
    return SimplicialSpace(std::move(name), std::move(gens), bp_it->second);
}

SimplicialSpace parse_space(const json& doc)
{
    auto space = parse_space_unchecked(doc);
    auto report = validate_space(space);
    if (!report.ok()) {
        const auto& v = report.violations.front();
        throw SpaceError("simplicial identity violated on '" + v.generator + "' for (i, j) = (" + std::to_string(v.i) +
                         ", " + std::to_string(v.j) + "): " + v.lhs + " != " + v.rhs);
    }
    return space;
}

json space_to_json(const SimplicialSpace& space)
{
    json list = json::array();
    for (const auto& g : space.generators()) {
        json faces = json::array();
        for (const auto& f : g.faces)
            faces.push_back(json::array({space.generator(f.base).name, f.word}));
        list.push_back({{"name", g.name}, {"dim", g.dim}, {"faces", faces}});
    }
    return {{"name", space.name()}, {"basepoint", space.generator(space.basepoint()).name}, {"simplices", list}};
}

// ---------------------------------------------------------------------------

namespace {

Generator vertex(const std::string& name)
{
    return Generator{name, 0, {}};
}

} // namespace

SimplicialSpace sphere(std::uint32_t n)
{
    if (n == 0)
        throw SpaceError("sphere dimension must be at least 1");
    std::vector<Generator> gens{vertex("pt")};
    Generator top{"sigma", n, {}};
    Simplex star{{}, 0};
    for (std::uint32_t k = n - 1; k-- > 0;)
        star.word.push_back(k);
    top.faces.assign(n + 1, star);
    gens.push_back(std::move(top));
    return SimplicialSpace("sphere" + std::to_string(n), std::move(gens), 0);
}

SimplicialSpace builtin_space(const std::string& name)
{
    const Simplex pt{{}, 0};
    if (name == "circle") {
        std::vector<Generator> gens{vertex("pt"), Generator{"e", 1, {pt, pt}}};
        return SimplicialSpace("circle", std::move(gens), 0);
    }
    if (name == "torus") {
        // pt, a, b, c, sigma, tau
        Simplex a{{}, 1}, b{{}, 2}, c{{}, 3};
        std::vector<Generator> gens{vertex("pt"),
                                    Generator{"a", 1, {pt, pt}},
                                    Generator{"b", 1, {pt, pt}},
                                    Generator{"c", 1, {pt, pt}},
                                    Generator{"sigma", 2, {c, b, a}},
                                    Generator{"tau", 2, {a, b, c}}};
        return SimplicialSpace("torus", std::move(gens), 0);
    }
    if (name == "pinched-torus") {
        // The edge b collapses to the basepoint.
        Simplex a{{}, 1}, c{{}, 2}, star{{0}, 0};
        std::vector<Generator> gens{vertex("pt"),
                                    Generator{"a", 1, {pt, pt}},
                                    Generator{"c", 1, {pt, pt}},
                                    Generator{"sigma", 2, {c, star, a}},
                                    Generator{"tau", 2, {a, star, c}}};
        return SimplicialSpace("pinched-torus", std::move(gens), 0);
    }
    static const std::regex sphere_re(R"(sphere(?:\((\d+)\)|-?(\d+)))");
    std::smatch m;
    if (std::regex_match(name, m, sphere_re)) {
        auto digits = m[1].matched ? m[1].str() : m[2].str();
        if (digits.size() > 4)
            throw SpaceError("sphere dimension too large: " + digits);
        return sphere(static_cast<std::uint32_t>(std::stoul(digits)));
    }
    throw SpaceError("unknown builtin space '" + name + "' (expected circle, sphereN, torus, pinched-torus)");
}

} // namespace hhx::simplicial
