#include "hhx/cli.hpp"

#include "hhx/actions.hpp"
#include "hhx/cochain.hpp"
#include "hhx/coeffalg.hpp"
#include "hhx/simplicial.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace hhx::cli {

using nlohmann::json;

namespace {

/// Carries an exit status out of a command body.
struct Failure {
    int status;
    std::string message;
};

json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Failure{kParseError, "cannot open '" + path + "'"};
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Failure{kParseError, "'" + path + "' is not valid JSON: " + e.what()};
    }
}

simplicial::SimplicialSpace load_space_unchecked(const RunConfig& config)
{
    if (config.space_path.has_value() == config.builtin.has_value())
        throw Failure{kParseError, "give exactly one of --space and --builtin"};
    try {
        if (config.builtin)
            return simplicial::builtin_space(*config.builtin);
        return simplicial::parse_space_unchecked(read_json(*config.space_path));
    } catch (const simplicial::SpaceError& e) {
        throw Failure{kParseError, e.what()};
    }
}

simplicial::SimplicialSpace load_space(const RunConfig& config)
{
    auto space = load_space_unchecked(config);
    auto report = simplicial::validate_space(space);
    if (!report.ok()) {
        const auto& v = report.violations.front();
        throw Failure{kValidationFailure, "space '" + space.name() + "' violates d_i d_j = d_{j-1} d_i on '" +
                                              v.generator + "' at (i, j) = (" + std::to_string(v.i) + ", " +
                                              std::to_string(v.j) + ")"};
    }
    return space;
}

std::optional<linalg::Field> field_override(const RunConfig& config)
{
    if (!config.field)
        return std::nullopt;
    const auto& f = *config.field;
    if (f == "Q")
        return linalg::Field::rationals();
    std::string digits = f;
    for (const char* prefix : {"Fp:", "F", "p"})
        if (digits.rfind(prefix, 0) == 0) {
            digits = digits.substr(std::string(prefix).size());
            break;
        }
    try {
        std::size_t used = 0;
        auto p = std::stoull(digits, &used);
        if (used != digits.size() || p >= (1ull << 31))
            throw std::invalid_argument(f);
        return linalg::Field::prime(static_cast<std::uint32_t>(p));
    } catch (const std::exception&) {
        throw Failure{kParseError, "--field must be Q or Fp:<prime>, got '" + f + "'"};
    }
}

void emit(std::ostream& out, const json& doc)
{
    out << doc.dump(2) << "\n";
}

std::string join(const std::vector<std::string>& items)
{
    std::string s;
    for (const auto& x : items)
        s += (s.empty() ? "" : " ") + x;
    return s;
}

template <class Body>
int guarded(std::ostream& err, Body&& body)
{
    try {
        return body();
    } catch (const Failure& f) {
        err << "error: " << f.message << "\n";
        return f.status;
    } catch (const cochain::BudgetExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kBudgetExceeded;
    } catch (const coeffalg::DocumentError& e) {
        err << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const coeffalg::AlgebraError& e) {
        err << "error: invalid algebra: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const coeffalg::ModuleError& e) {
        err << "error: invalid module: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kValidationFailure;
    }
}

} // namespace

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto space = load_space_unchecked(config);
        auto report = simplicial::validate_space(space);
        if (config.format == "json") {
            json violations = json::array();
            for (const auto& v : report.violations)
                violations.push_back(
                    {{"generator", v.generator}, {"i", v.i}, {"j", v.j}, {"lhs", v.lhs}, {"rhs", v.rhs}});
            emit(out, {{"space", space.name()}, {"valid", report.ok()}, {"violations", violations}});
        } else {
            out << "space: " << space.name() << "\n";
            for (const auto& v : report.violations)
                out << "violation: " << v.generator << " (i=" << v.i << ", j=" << v.j << "): d_" << v.i << " d_" << v.j
                    << " = " << v.lhs << " but d_" << (v.j - 1) << " d_" << v.i << " = " << v.rhs << "\n";
            out << (report.ok() ? "pass" : "fail") << "\n";
        }
        return report.ok() ? kOk : kValidationFailure;
    });
}

int cmd_actions(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto space = load_space(config);
        auto partition = actions::sweep_closure(space);
        std::optional<bool> agrees;
        if (config.paranoid_cap) {
            auto paranoid = actions::paranoid_closure(space, *config.paranoid_cap);
            agrees = paranoid == partition;
        }

        if (config.template_path) {
            json tmpl;
            if (config.algebra_path) {
                auto alg = coeffalg::parse_algebra(read_json(*config.algebra_path), field_override(config));
                std::vector<std::string> ids;
                for (const auto& c : partition.classes)
                    ids.push_back(c.id);
                tmpl = coeffalg::module_to_json(coeffalg::uniform_module(ids, coeffalg::regular_action(alg)), alg);
                if (ids.empty())
                    tmpl["dim"] = alg.dim();
            } else {
                json acts = json::object();
                for (const auto& c : partition.classes)
                    acts[c.id] = json::array();
                tmpl = {{"dim", 0}, {"actions", acts}};
            }
            std::ofstream f(*config.template_path);
            if (!f)
                throw Failure{kParseError, "cannot write '" + *config.template_path + "'"};
            f << tmpl.dump(2) << "\n";
        }

        if (config.format == "json") {
            json doc = actions::partition_to_json(partition);
            if (agrees)
                doc["paranoid"] = {{"cap", *config.paranoid_cap}, {"agrees", *agrees}};
            emit(out, doc);
        } else {
            out << "space: " << space.name() << "\n";
            out << "slots (" << partition.slots.size() << "):\n";
            for (const auto& s : actions::enumerate_slots(space)) {
                auto dir = actions::slot_direction(space, s);
                out << "  " << actions::slot_id(space, s);
                if (!dir.empty())
                    out << "  " << dir << " action of " << space.generator(s.generator).name;
                else
                    out << "  action of " << space.generator(s.generator).name << " pointed at face " << s.index;
                out << "\n";
            }
            out << "classes (" << partition.class_count() << "): " << partition.coefficient_kind() << "\n";
            for (const auto& c : partition.classes)
                out << "  " << c.id << ": " << join(c.members) << "\n";
            if (agrees)
                out << "paranoid closure (cap " << *config.paranoid_cap << "): " << (*agrees ? "agrees" : "DISAGREES")
                    << "\n";
        }
        return agrees.value_or(true) ? kOk : kValidationFailure;
    });
}

int cmd_cohomology(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (!config.algebra_path || !config.module_path)
            throw Failure{kParseError, "cohomology needs --algebra and --module"};
        if (config.max_degree < 1)
            throw Failure{kParseError, "--max-degree must be at least 1"};
        auto space = load_space(config);
        auto partition = actions::sweep_closure(space);
        auto alg = coeffalg::parse_algebra(read_json(*config.algebra_path), field_override(config));
        auto module = coeffalg::parse_module(read_json(*config.module_path), alg, partition, config.override_slots);
        auto assignment = coeffalg::make_assignment(partition, std::move(module), config.override_slots);
        cochain::CosimplicialModule cm(
            cochain::CochainSetup{space, alg, std::move(assignment), config.max_degree, config.budget});

        auto identities = cm.check_cosimplicial_identities();
        std::optional<std::vector<std::size_t>> hh;
        if (identities.ok())
            hh = cm.cohomology_dims();

        if (config.format == "json") {
            emit(out, cochain::report_to_json(cm, identities, hh));
        } else {
            auto doc = cochain::report_to_json(cm, identities, hh);
            out << "space: " << space.name() << " (" << partition.coefficient_kind() << ")\n";
            out << "algebra: dim " << alg.dim() << " over " << alg.field().name() << "; module dim "
                << cm.setup().assignment.module.dim << "\n";
            out << "t:        " << doc["t"].dump() << "\n";
            out << "hom_dims: " << doc["hom_dims"].dump() << "\n";
            out << "identities: " << (identities.ok() ? "pass" : "FAIL") << " (" << identities.checked
                << " instances)\n";
            for (const auto& f : identities.failures)
                out << "  failed " << f.relation << " at n=" << f.n << " i=" << f.i << " j=" << f.j << "\n";
            if (hh) {
                out << "HH:";
                for (std::size_t n = 0; n < hh->size(); ++n)
                    out << " HH^" << n << "=" << (*hh)[n];
                out << "\n";
            }
        }
        return identities.ok() ? kOk : kValidationFailure;
    });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig config;
    CLI::App app{"Higher-order Hochschild cohomology with multi-module coefficients"};
    app.require_subcommand(1);

    auto add_space = [&](CLI::App* sub) {
        auto* sp = sub->add_option("--space", config.space_path, "space description (JSON)");
        auto* bi = sub->add_option("--builtin", config.builtin, "circle, sphereN, torus, pinched-torus");
        sp->excludes(bi);
        sub->add_option("--format", config.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    };

    auto* validate = app.add_subcommand("validate", "check the simplicial identities of a space");
    add_space(validate);

    auto* acts = app.add_subcommand("actions", "compute the action classes of a space");
    add_space(acts);
    acts->add_option("--paranoid", config.paranoid_cap, "also close over all simplices up to this dimension");
    acts->add_option("--emit-template", config.template_path, "write a module skeleton keyed by class id");
    acts->add_option("--algebra", config.algebra_path, "algebra used to fill the template");
    acts->add_option("--field", config.field, "override the algebra's field (Q or Fp:<p>)");

    auto* coh = app.add_subcommand("cohomology", "compute HH^0..HH^N");
    add_space(coh);
    coh->add_option("--algebra", config.algebra_path, "algebra (JSON)")->required();
    coh->add_option("--module", config.module_path, "multi-module keyed by class id (JSON)")->required();
    coh->add_option("-N,--max-degree", config.max_degree, "top cohomological degree");
    coh->add_option("--field", config.field, "override the algebra's field (Q or Fp:<p>)");
    coh->add_flag("--override-slots", config.override_slots, "test mode: module keyed by slot id");
    coh->add_option("--budget", config.budget, "largest hom-space dimension to build");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kParseError;
    }

    if (validate->parsed()) {
        config.subcommand = "validate";
        return cmd_validate(config, out, err);
    }
    if (acts->parsed()) {
        config.subcommand = "actions";
        return cmd_actions(config, out, err);
    }
    config.subcommand = "cohomology";
    return cmd_cohomology(config, out, err);
}

} // namespace hhx::cli
