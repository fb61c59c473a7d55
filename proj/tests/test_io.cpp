#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "trivirus/examples.hpp"
#include "trivirus/pipeline.hpp"

using namespace trivirus;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

const char* kMinimal = R"({
  "n": 2, "m": 1,
  "D": [[1, 1]],
  "B": [[[0, 2], [2, 0]]]
})";

} // namespace

TEST_CASE("scenario parse and round trip") {
    Scenario s = example_scenario(3, 17);
    s.line_c = (Vector::Ones(4) - Vector::Constant(4, 1.0 / 3.0)).asDiagonal() * s.infection[1];
    s.identical = false;
    s.integrator.rel_tol = 1e-9;
    s.integrator.steady_state_tol = 1e-14;
    s.analyses = {Analysis::Line, Analysis::Dfe};
    const Json once = scenario_to_json(s);
    const Scenario parsed = parse_scenario_text(once.dump());
    CHECK(scenario_to_json(parsed) == once);
    CHECK(parsed.system() == s.system());
    CHECK(*parsed.seed == 17);
    CHECK(parsed.requests(Analysis::Line));
    CHECK_FALSE(parsed.requests(Analysis::Boundary));
    CHECK(*parsed.line_c == *s.line_c);

    const Scenario minimal = parse_scenario_text(kMinimal);
    CHECK(minimal.n == 2);
    CHECK(minimal.t_end == 1e4);
    CHECK(minimal.analyses.size() == 5);
    CHECK(code_of([&] { minimal.initial_condition(); }) == ErrorCode::SchemaError);
}

TEST_CASE("decimal parsing is exact to the nearest double") {
    const Scenario s = parse_scenario_text(R"({"n": 2, "m": 1, "D": [[0.1, 0.7]], "B": [[0, 0.3, 1e-3, 0]]})");
    CHECK(s.healing[0](0) == 0.1);
    CHECK(s.healing[0](1) == 0.7);
    CHECK(s.infection[0](0, 1) == 0.3);
    CHECK(s.infection[0](1, 0) == 1e-3);
}

TEST_CASE("schema errors") {
    for (const char* text : {
             "{",
             R"({"n": 2, "m": 1, "D": [[1, 1]]})",
             R"({"n": 2, "m": 1, "D": [[1, 1]], "B": [[[0, 2]]]})",
             R"({"n": 2, "m": 1, "D": [[1, "x"]], "B": [[[0, 2], [2, 0]]]})",
             R"({"n": 2, "m": 1, "D": [[1, 1]], "B": [[[0, 2], [2, 0]]], "colour": 1})",
             R"({"n": 2, "m": 1, "D": [[1, 1]], "B": [[[0, 2], [2, 0]]], "analyses": ["fourier"]})",
             R"({"n": 2.5, "m": 1, "D": [[1, 1]], "B": [[[0, 2], [2, 0]]]})",
             R"({"n": 2, "m": 1, "D": [[1, 1]], "B": [[[0, 2], [2, 0]]], "initial_condition": {"seed": -1}})",
         }) {
        CAPTURE(text);
        CHECK(code_of([&] { parse_scenario_text(text); }) == ErrorCode::SchemaError);
    }
    CHECK(code_of([] { load_scenario("/nonexistent/file.json"); }) == ErrorCode::IoError);
}

TEST_CASE("json numbers") {
    CHECK(json_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(std::isinf(number_from_json(json_number(std::numeric_limits<double>::infinity()))));
    CHECK(number_from_json(json_number(0.1)) == 0.1);
    CHECK(state_label(0, 4) == "x1_1");
    CHECK(state_label(9, 4) == "x3_2");
}

TEST_CASE("trajectory CSV layout and precision") {
    Trajectory t;
    t.n = 2;
    t.m = 2;
    t.times = {0.0, 0.1};
    Vector a(4);
    a << 0.1, 1.0 / 3.0, 0.0, 2e-300;
    t.states = {a, a};
    const std::string csv = trajectory_csv(t);
    std::istringstream lines(csv);
    std::string header;
    std::string row;
    std::getline(lines, header);
    CHECK(header == "t,x1_1,x1_2,x2_1,x2_2");
    std::getline(lines, row);
    CHECK(row == "0,0.10000000000000001,0.33333333333333331,0,2.0000000000000001e-300");
    std::vector<double> values;
    std::stringstream cells(row);
    for (std::string cell; std::getline(cells, cell, ',');) values.push_back(std::stod(cell));
    CHECK(values[2] == 1.0 / 3.0);
}

TEST_CASE("atomic writes") {
    const fs::path dir = fs::temp_directory_path() / "trivirus_io_test";
    fs::remove_all(dir);
    const fs::path target = dir / "nested" / "out.txt";
    write_file_atomic(target, "hello\n");
    std::ifstream in(target);
    std::string content;
    std::getline(in, content);
    CHECK(content == "hello");
    write_file_atomic(target, "again\n");
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(target.parent_path())) {
        (void)entry;
        ++files;
    }
    CHECK(files == 1);
    fs::remove_all(dir);
}
