#include "doctest.h"

#include "hhx/actions.hpp"
#include "hhx/cochain.hpp"

using namespace hhx::cochain;
using hhx::actions::sweep_closure;
using hhx::coeffalg::endomorphism_bimodule;
using hhx::coeffalg::ground_field;
using hhx::coeffalg::make_assignment;
using hhx::coeffalg::MultiModule;
using hhx::coeffalg::regular_action;
using hhx::coeffalg::truncated_polynomial;
using hhx::coeffalg::twisted_action;
using hhx::coeffalg::uniform_module;
using hhx::coeffalg::Vector;
using hhx::linalg::Field;
using hhx::linalg::Scalar;
using hhx::simplicial::builtin_space;

namespace {

std::vector<std::string> class_ids(const hhx::actions::ActionPartition& p)
{
    std::vector<std::string> ids;
    for (const auto& c : p.classes)
        ids.push_back(c.id);
    return ids;
}

CosimplicialModule build(const std::string& space_name, const Algebra& alg, MultiModule module, std::uint32_t N,
                         bool override_slots = false, std::uint64_t budget = kDefaultBudget)
{
    auto space = builtin_space(space_name);
    auto partition = sweep_closure(space);
    auto assignment = make_assignment(partition, std::move(module), override_slots);
    return CosimplicialModule(CochainSetup{space, alg, std::move(assignment), N, budget});
}

CosimplicialModule regular(const std::string& space_name, const Algebra& alg, std::uint32_t N)
{
    auto ids = class_ids(sweep_closure(builtin_space(space_name)));
    return build(space_name, alg, uniform_module(ids, regular_action(alg)), N);
}

Algebra dual() { return truncated_polynomial(Field::rationals(), 2); }

MultiModule circle_twisted(const Algebra& alg)
{
    return MultiModule{alg.dim(), {{"e.0", regular_action(alg)}, {"e.1", twisted_action(alg, {Vector{1, 0}, Vector{0, -1}})}}};
}

} // namespace

TEST_CASE("hom_dimension examples")
{
    auto alg = dual();
    auto circle = regular("circle", alg, 2);
    CHECK(circle.t(3) == 3);
    CHECK(circle.hom_dimension(0) == 2);
    CHECK(circle.hom_dimension(3) == 16);

    auto s2 = regular("sphere2", alg, 2);
    CHECK(s2.t(3) == 3);
    CHECK(s2.hom_dimension(3) == 16);

    auto torus = regular("torus", alg, 3);
    CHECK(torus.t(3) == 15);
    CHECK(torus.t(4) == 24);
    CHECK(torus.hom_dimension(4) == 2ull << 24);

    auto empty = build("circle", alg, uniform_module({"e.0", "e.1"}, {Matrix(alg.field(), 0, 0), Matrix(alg.field(), 0, 0)}), 2);
    for (std::uint32_t n = 0; n <= 3; ++n)
        CHECK(empty.hom_dimension(n) == 0);
    CHECK(empty.cohomology_dims() == std::vector<std::size_t>{0, 0, 0});
}

TEST_CASE("coface examples on the circle are the classical ones")
{
    auto alg = dual();
    auto mod = circle_twisted(alg);
    auto cm = build("circle", alg, mod, 1);
    const std::size_t m = 2;

    // (d^0 f)(a) = a.f(1) with the forward action, (d^1 f)(a) = f(1).a with the backward one
    for (std::uint32_t i : {0u, 1u}) {
        auto d = cm.coface_matrix(0, i);
        CHECK(d.rows() == alg.dim() * m);
        CHECK(d.cols() == m);
        const auto& action = mod.actions.at(i == 0 ? "e.0" : "e.1");
        for (std::size_t t = 0; t < alg.dim(); ++t)
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t c = 0; c < m; ++c)
                    CHECK(d.at(t * m + r, c) == action[t].at(r, c));
    }

    // s^0 : Hom(A, M) -> M is evaluation at the unit
    auto s = cm.codegeneracy_matrix(0, 0);
    CHECK(s.rows() == m);
    CHECK(s.cols() == alg.dim() * m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < alg.dim() * m; ++c)
            CHECK(s.at(r, c) == Scalar(c == r ? 1 : 0));

    CHECK(cm.codegeneracy_matrix(0, 0) * cm.coface_matrix(0, 0) == Matrix::identity(alg.field(), m));
    CHECK(cm.codegeneracy_matrix(0, 0) * cm.coface_matrix(0, 1) == Matrix::identity(alg.field(), m));
}

TEST_CASE("coface matches the classical bar differential on the circle in degree 1")
{
    // (d^1 f)(a, b) = f(ab) for the middle coface
    auto alg = truncated_polynomial(Field::rationals(), 3);
    auto cm = regular("circle", alg, 2);
    const std::size_t d = alg.dim(), m = d;
    auto mid = cm.coface_matrix(1, 1);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t u = 0; u < d; ++u)
                for (std::size_t r = 0; r < m; ++r)
                    for (std::size_t c = 0; c < m; ++c)
                        CHECK(mid.at((a * d + b) * m + r, u * m + c) == (r == c ? alg.product(a, b)[u] : Scalar(0)));
}

TEST_CASE("ground field coefficients")
{
    auto k = ground_field(Field::rationals());
    for (const char* space : {"circle", "sphere2", "torus", "pinched-torus"}) {
        auto cm = regular(space, k, 4);
        for (std::uint32_t n = 0; n <= 4; ++n) {
            CHECK(cm.hom_dimension(n) == 1);
            for (std::uint32_t i = 0; i <= n + 1; ++i)
                CHECK(cm.coface_matrix(n, i) == Matrix::identity(k.field(), 1));
            auto delta = cm.differential(n);
            if (n % 2 == 0)
                CHECK(delta.is_zero());
            else
                CHECK(delta == Matrix::identity(k.field(), 1));
        }
        CHECK(cm.cohomology_dims() == std::vector<std::size_t>{1, 0, 0, 0, 0});
    }
}

TEST_CASE("differential examples")
{
    auto alg = dual();
    CHECK(regular("circle", alg, 2).differential(0).is_zero());

    auto tw = build("circle", alg, circle_twisted(alg), 2);
    auto delta0 = tw.differential(0);
    CHECK(hhx::linalg::rank(delta0) == 1);
    CHECK(hhx::linalg::kernel_dim(delta0) == 1);
}

TEST_CASE("Hochschild cohomology of the dual numbers on the circle")
{
    auto alg = dual();
    // Values from a sympy bar-complex computation, also what the periodic
    // resolution of k[x]/x^2 predicts.
    CHECK(regular("circle", alg, 4).cohomology_dims() == std::vector<std::size_t>{2, 1, 1, 1, 1});
    CHECK(build("circle", alg, circle_twisted(alg), 4).cohomology_dims() == std::vector<std::size_t>{1, 1, 1, 1, 1});
}

TEST_CASE("property: circle cohomology equals the classical oracle")
{
    for (auto field : {Field::rationals(), Field::prime(2), Field::prime(3)}) {
        for (std::size_t n : {1u, 2u, 3u}) {
            auto alg = truncated_polynomial(field, n);
            std::vector<MultiModule> modules;
            modules.push_back(uniform_module({"e.0", "e.1"}, regular_action(alg)));
            if (n >= 2) {
                Vector phi(n, field.from_int(0));
                phi[1] = field.from_int(-1);
                std::vector<Vector> images{alg.unit(), phi};
                for (std::size_t t = 2; t < n; ++t)
                    images.push_back(alg.multiply(images.back(), phi));
                modules.push_back(MultiModule{n, {{"e.0", regular_action(alg)}, {"e.1", twisted_action(alg, images)}}});
            }
            if (n <= 2)
                modules.push_back(endomorphism_bimodule(alg, regular_action(alg), "e.0", "e.1"));
            for (const auto& mod : modules) {
                CAPTURE(field.name());
                CAPTURE(n);
                CAPTURE(mod.dim);
                std::uint32_t N = mod.dim * n > 6 ? 2 : 3;
                auto cm = build("circle", alg, mod, N);
                CHECK(cm.cohomology_dims() == classical_oracle(alg, mod, "e.0", "e.1", N));
            }
        }
    }
}

TEST_CASE("cosimplicial identities hold for class-respecting coefficients")
{
    auto alg = dual();
    for (const char* space : {"circle", "sphere2", "sphere3", "sphere4"}) {
        auto report = regular(space, alg, 3).check_cosimplicial_identities();
        CAPTURE(space);
        CHECK(report.ok());
        CHECK(report.checked > 0);
    }
    // Degree-4 hom-spaces of the tori are 2^21 and 2^25 dimensional, stop at 3.
    for (const char* space : {"torus", "pinched-torus"}) {
        auto report = regular(space, alg, 2).check_cosimplicial_identities(3);
        CAPTURE(space);
        CHECK(report.ok());
    }
    auto end = build("pinched-torus", alg, endomorphism_bimodule(alg, regular_action(alg), "a.0", "a.1"), 1);
    CHECK(end.check_cosimplicial_identities().ok());
    CHECK(end.cohomology_dims().size() == 2);
}

TEST_CASE("cosimplicial identities with truncated x^3 and ground field")
{
    for (auto alg : {truncated_polynomial(Field::rationals(), 3), ground_field(Field::rationals())}) {
        for (const char* space : {"circle", "sphere2", "sphere3"})
            CHECK(regular(space, alg, 2).check_cosimplicial_identities(3).ok());
        for (const char* space : {"torus", "pinched-torus"})
            CHECK(regular(space, alg, 1).check_cosimplicial_identities(2).ok());
    }
    auto x3 = truncated_polynomial(Field::rationals(), 3);
    auto circle = build("circle", x3, endomorphism_bimodule(x3, regular_action(x3), "e.0", "e.1"), 2);
    CHECK(circle.check_cosimplicial_identities().ok());
}

TEST_CASE("per-slot override breaking a class fails relation a")
{
    auto alg = dual();
    auto tw = twisted_action(alg, {Vector{1, 0}, Vector{0, -1}});
    MultiModule broken{2, {{"sigma.0", regular_action(alg)}, {"sigma.1", regular_action(alg)}, {"sigma.2", tw}}};
    auto report = build("sphere2", alg, broken, 1, true).check_cosimplicial_identities();
    CHECK_FALSE(report.ok());
    CHECK(report.fails("a"));
    bool low = false;
    for (const auto& f : report.failures)
        low = low || (f.relation == "a" && f.n <= 1);
    CHECK(low);

    MultiModule equal{2, {{"sigma.0", tw}, {"sigma.1", tw}, {"sigma.2", tw}}};
    CHECK(build("sphere2", alg, equal, 1, true).check_cosimplicial_identities().ok());
}

TEST_CASE("setup validation and budget")
{
    auto alg = dual();
    CHECK_THROWS_AS(regular("circle", alg, 0), CochainError);

    auto torus = builtin_space("torus");
    auto circle_partition = sweep_closure(builtin_space("circle"));
    auto wrong = make_assignment(circle_partition, uniform_module({"e.0", "e.1"}, regular_action(alg)));
    CHECK_THROWS_AS(CosimplicialModule(CochainSetup{torus, alg, wrong, 1}), CochainError);

    auto f5 = truncated_polynomial(Field::prime(5), 2);
    auto mixed = make_assignment(sweep_closure(torus), uniform_module({"a.0"}, regular_action(f5)));
    CHECK_THROWS_AS(CosimplicialModule(CochainSetup{torus, alg, mixed, 1}), CochainError);

    auto big = regular("torus", alg, 5);
    try {
        big.cohomology_dims();
        FAIL("expected the budget to be exceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.degree == 4);
        CHECK(e.dimension == 2ull << 24);
    }
    CHECK_THROWS_AS(big.coface_matrix(4, 0), BudgetExceeded);
    CHECK_NOTHROW(big.coface_matrix(1, 0));
    CHECK_THROWS_AS(big.coface_matrix(6, 0), CochainError);
}

TEST_CASE("report JSON")
{
    auto cm = regular("circle", dual(), 2);
    auto ids = cm.check_cosimplicial_identities();
    auto doc = report_to_json(cm, ids, cm.cohomology_dims());
    CHECK(doc["identities"] == "pass");
    CHECK(doc["hh_dims"] == nlohmann::json::array({2, 1, 1}));
    CHECK(doc["t"] == nlohmann::json::array({0, 1, 2, 3}));
    CHECK(doc["hom_dims"] == nlohmann::json::array({2, 4, 8, 16}));
}
