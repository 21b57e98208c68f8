#include "doctest.h"

#include "hhx/cli.hpp"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using hhx::cli::run;
using nlohmann::json;

namespace {

std::string data(const std::string& name)
{
    const char* dir = std::getenv("HHX_DATA_DIR");
    REQUIRE(dir != nullptr);
    return std::string(dir) + "/" + name;
}

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int status = run(args, out, err);
    return {status, out.str(), err.str()};
}

json call_json(std::vector<std::string> args, int expected_status = 0)
{
    args.push_back("--format");
    args.push_back("json");
    auto r = call(args);
    CHECK(r.status == expected_status);
    INFO(r.err);
    return json::parse(r.out);
}

// Runs the installed binary so the real exit status is observed.
int exec_binary(const std::string& args, std::string* output = nullptr)
{
    std::string cmd = std::string(HHX_BINARY) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string text;
    char buf[4096];
    while (auto n = fread(buf, 1, sizeof buf, pipe))
        text.append(buf, n);
    int status = pclose(pipe);
    if (output)
        *output = text;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("validate")
{
    auto ok = call({"validate", "--builtin", "torus"});
    CHECK(ok.status == 0);
    CHECK(ok.out.find("pass") != std::string::npos);

    auto bad = call({"validate", "--space", data("bad.json")});
    CHECK(bad.status == 2);
    CHECK(bad.err.find("dimension") != std::string::npos);

    auto twisted = call_json({"validate", "--space", data("twisted-torus.json")}, 1);
    CHECK(twisted["valid"] == false);
    REQUIRE(twisted["violations"].size() == 1);
    CHECK(twisted["violations"][0]["generator"] == "sigma");
    CHECK(twisted["violations"][0]["i"] == 1);
    CHECK(twisted["violations"][0]["j"] == 2);

    CHECK(call({"validate", "--space", data("missing.json")}).status == 2);
    CHECK(call({"validate", "--space", data("truncated.json")}).status == 2);
    CHECK(call({"validate"}).status == 2);
    CHECK(call({"validate", "--builtin", "torus", "--space", data("bad.json")}).status == 2);
    CHECK(call({"validate", "--builtin", "moebius"}).status == 2);
    CHECK(call({"frobnicate"}).status == 2);
    CHECK(call({}).status == 2);
}

TEST_CASE("actions")
{
    auto torus = call_json({"actions", "--builtin", "torus"});
    CHECK(torus["class_count"] == 1);
    CHECK(torus["coefficient_kind"] == "uni-module");

    auto pinched = call_json({"actions", "--builtin", "pinched-torus"});
    CHECK(pinched["class_count"] == 2);
    CHECK(pinched["coefficient_kind"] == "bi-module");
    CHECK(pinched["classes"][1]["members"] == json::array({"a.1", "c.0", "sigma.1"}));

    CHECK(call_json({"actions", "--builtin", "sphere3"})["class_count"] == 1);

    // the file version of the pinched torus, with bare-name faces
    CHECK(call_json({"actions", "--space", data("pinched-torus.json")}) == pinched);

    auto paranoid = call_json({"actions", "--builtin", "pinched-torus", "--paranoid", "5"});
    CHECK(paranoid["paranoid"]["agrees"] == true);
    CHECK(paranoid["paranoid"]["cap"] == 5);

    auto text = call({"actions", "--builtin", "circle"});
    CHECK(text.status == 0);
    CHECK(text.out.find("e.0  forward action of e") != std::string::npos);
    CHECK(text.out.find("e.1  backward action of e") != std::string::npos);
    CHECK(text.out.find("bi-module") != std::string::npos);

    CHECK(call({"actions", "--space", data("twisted-torus.json")}).status == 1);
    CHECK(call({"actions", "--builtin", "torus", "--paranoid", "1"}).status == 1);
}

TEST_CASE("emit-template feeds cohomology")
{
    auto dir = std::filesystem::temp_directory_path() / "hhx-cli-test";
    std::filesystem::create_directories(dir);
    auto tmpl = (dir / "pinched.json").string();
    REQUIRE(call({"actions", "--builtin", "pinched-torus", "--emit-template", tmpl, "--algebra", data("dual.json")})
                .status == 0);
    std::ifstream in(tmpl);
    auto doc = json::parse(in);
    CHECK(doc["dim"] == 2);
    CHECK(doc["actions"].contains("a.0"));
    CHECK(doc["actions"].contains("a.1"));
    CHECK(doc["actions"].size() == 2);

    auto report = call_json({"cohomology", "--builtin", "pinched-torus", "--algebra", data("dual.json"), "--module",
                             tmpl, "-N", "1"});
    CHECK(report["identities"] == "pass");
    CHECK(report["hh_dims"].size() == 2);

    auto skeleton = (dir / "skeleton.json").string();
    REQUIRE(call({"actions", "--builtin", "torus", "--emit-template", skeleton}).status == 0);
    std::ifstream in2(skeleton);
    auto sk = json::parse(in2);
    CHECK(sk["actions"].contains("a.0"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("cohomology")
{
    auto circle = call_json(
        {"cohomology", "--builtin", "circle", "--algebra", data("dual.json"), "--module", data("circle-regular.json"), "-N", "4"});
    CHECK(circle["hh_dims"] == json::array({2, 1, 1, 1, 1}));
    CHECK(circle["identities"] == "pass");
    CHECK(circle["space"] == "circle");
    CHECK(circle["t"] == json::array({0, 1, 2, 3, 4, 5}));
    CHECK(circle["hom_dims"][5] == 64);

    auto twisted = call_json({"cohomology", "--builtin", "circle", "--algebra", data("dual.json"), "--module",
                              data("circle-twisted.json"), "--max-degree", "3"});
    CHECK(twisted["hh_dims"] == json::array({1, 1, 1, 1}));

    auto s2 = call_json(
        {"cohomology", "--builtin", "sphere2", "--algebra", data("trivial.json"), "--module", data("sphere2-m2.json"), "-N", "4"});
    CHECK(s2["hh_dims"] == json::array({2, 0, 0, 0, 0}));

    // over F_2 the twist is trivial and the answer is the symmetric one
    auto f2 = call_json({"cohomology", "--builtin", "circle", "--algebra", data("dual.json"), "--module",
                         data("circle-twisted.json"), "-N", "3", "--field", "Fp:2"});
    CHECK(f2["hh_dims"] == json::array({2, 2, 2, 2}));
}

TEST_CASE("cohomology failure statuses")
{
    auto base = std::vector<std::string>{"cohomology", "--algebra", data("dual.json")};
    auto with = [&](std::vector<std::string> extra) {
        auto args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        return call(args);
    };

    auto budget = with({"--builtin", "torus", "--module", data("torus-regular.json"), "-N", "5"});
    CHECK(budget.status == 3);
    CHECK(budget.err.find("degree 4") != std::string::npos);
    CHECK(with({"--builtin", "torus", "--module", data("torus-regular.json"), "-N", "2", "--budget", "100"}).status == 3);

    auto mismatch = with({"--builtin", "torus", "--module", data("circle-regular.json")});
    CHECK(mismatch.status == 1);
    CHECK(mismatch.err.find("class-id mismatch") != std::string::npos);

    CHECK(with({"--builtin", "circle", "--module", data("missing.json")}).status == 2);
    CHECK(with({"--builtin", "circle", "--module", data("truncated.json")}).status == 2);
    CHECK(with({"--builtin", "circle", "--module", data("circle-regular.json"), "-N", "0"}).status == 2);
    CHECK(with({"--builtin", "circle", "--module", data("circle-regular.json"), "--field", "Fp:4"}).status == 2);
    CHECK(with({"--builtin", "circle", "--module", data("circle-regular.json"), "--format", "xml"}).status == 2);
    CHECK(call({"cohomology", "--builtin", "circle", "--module", data("circle-regular.json")}).status == 2);
    CHECK(with({"--space", data("twisted-torus.json"), "--module", data("torus-regular.json")}).status == 1);

    auto over = call_json({"cohomology", "--builtin", "sphere2", "--override-slots", "--algebra", data("dual.json"),
                           "--module", data("sphere2-unequal-slots.json"), "-N", "1"},
                          1);
    REQUIRE(over["identities"].is_array());
    CHECK(over["identities"][0]["relation"] == "a");
    CHECK(over["hh_dims"].is_null());
}

TEST_CASE("JSON reports are deterministic")
{
    std::vector<std::vector<std::string>> commands = {
        {"actions", "--builtin", "pinched-torus", "--format", "json"},
        {"cohomology", "--builtin", "pinched-torus", "--algebra", data("dual.json"), "--module",
         data("pinched-regular.json"), "--format", "json"},
        {"cohomology", "--builtin", "circle", "--algebra", data("dual.json"), "--module", data("circle-twisted.json"),
         "-N", "3", "--format", "json"},
        {"validate", "--space", data("twisted-torus.json"), "--format", "json"},
    };
    for (const auto& args : commands) {
        auto first = call(args);
        auto second = call(args);
        CHECK(first.out == second.out);
        CHECK(first.status == second.status);
        CHECK(json::accept(first.out));
    }
}

TEST_CASE("binary exit statuses")
{
    std::string out;
    CHECK(exec_binary("validate --builtin torus") == 0);
    CHECK(exec_binary("validate --space " + data("bad.json")) == 2);
    CHECK(exec_binary("validate --space " + data("twisted-torus.json"), &out) == 1);
    CHECK(out.find("sigma") != std::string::npos);
    CHECK(exec_binary("cohomology --builtin torus --algebra " + data("dual.json") + " --module " +
                      data("torus-regular.json") + " -N 5") == 3);
    CHECK(exec_binary("--help", &out) == 0);
    CHECK(out.find("cohomology") != std::string::npos);
}
