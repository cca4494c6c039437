// test_scenario.cpp — Config parsing, scenario runs and table output

#include "cavrevive/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace cr = cavrevive;
namespace sc = cavrevive::scenario;

namespace {

sc::ScenarioConfig parse(const std::string& text) {
    std::istringstream in(text);
    return sc::config_from_keys(sc::parse_key_values(in));
}

std::string config_error(const std::string& text) {
    try {
        parse(text);
    } catch (const cr::ConfigError& e) {
        return e.what();
    }
    return "";
}

const std::string kMinimal = "model.n_qubits = 1\nmodel.nbar = 50\n";

std::string sample(const std::string& name) { return std::string(CAVREVIVE_SAMPLES_DIR) + "/" + name; }

} // namespace

TEST(Config, MinimalDefaults) {
    const auto c = parse("# comment\n\n" + kMinimal);
    EXPECT_EQ(c.model.n_qubits, 1);
    EXPECT_EQ(c.model.nbar, 50.0);
    EXPECT_EQ(c.model.coupling, 1.0);
    EXPECT_EQ(c.model.fock_cutoff, -1);
    EXPECT_EQ(c.initial, sc::InitialKind::ground);
    EXPECT_EQ(c.steps, 1);
    EXPECT_TRUE(c.observables.p_initial);
    EXPECT_FALSE(c.observables.tangle);
    EXPECT_EQ(c.format, sc::OutputFormat::csv);
}

TEST(Config, ErrorsNameTheKey) {
    EXPECT_EQ(config_error("model.nbar = 5\n").rfind("model.n_qubits", 0), 0u);
    EXPECT_EQ(config_error(kMinimal + "model.colour = red\n").rfind("model.colour", 0), 0u);
    EXPECT_EQ(config_error(kMinimal + "model.nbar = 3\n").rfind("model.nbar", 0), 0u);
    EXPECT_EQ(config_error(kMinimal + "time.steps = many\n").rfind("time.steps", 0), 0u);
    EXPECT_EQ(config_error("model.n_qubits = 2\nmodel.nbar = 50\ninitial.kind = basin\ninitial.a_re = 0.9\n").rfind("initial.a_re", 0), 0u);
    EXPECT_EQ(config_error(kMinimal + "initial.kind = basin\ninitial.beta_re = 0.1\n").rfind("initial.beta_re", 0), 0u);
    EXPECT_EQ(config_error(kMinimal + "observables.tangle = true\n").rfind("observables.tangle", 0), 0u);
    EXPECT_EQ(config_error(kMinimal + "output.format = xml\n").rfind("output.format", 0), 0u);
    EXPECT_EQ(config_error(kMinimal + "time.start = 5\ntime.stop = 1\n").rfind("time.stop", 0), 0u);
    EXPECT_EQ(config_error(kMinimal + "model.lambda = 0\n").rfind("model.lambda", 0), 0u);
    EXPECT_NE(config_error(kMinimal + "no equals sign\n"), "");
}

TEST(Config, CustomDickeMustBeNormalized) {
    const auto ok = parse("model.n_qubits = 2\nmodel.nbar = 5\ninitial.kind = custom_dicke\n"
                          "initial.amps_re = 0.6, 0, 0.8\n");
    ASSERT_EQ(ok.dicke_amps.size(), 3u);
    EXPECT_EQ(ok.dicke_amps[2], cr::cplx(0.8));
    EXPECT_NE(config_error("model.n_qubits = 2\nmodel.nbar = 5\ninitial.kind = custom_dicke\n"
                           "initial.amps_re = 0.6, 0, 0.7\n"), "");
    EXPECT_NE(config_error("model.n_qubits = 2\nmodel.nbar = 5\ninitial.kind = custom_dicke\n"
                           "initial.amps_re = 0.6, 0.8\n"), "");
}

TEST(Config, KeyValueRoundTrip) {
    const auto c = parse("model.n_qubits = 2\nmodel.nbar = 12.5\nmodel.theta = 0.3\ninitial.kind = basin\n"
                         "initial.a_re = 0.1\ninitial.a_im = -0.2\ntime.stop = 9\ntime.steps = 4\n"
                         "observables.tangle = true\noutput.format = json\n");
    sc::KeyValues kv;
    for (const auto& [k, v] : sc::to_key_values(c)) kv[k] = v;
    kv.erase("model.fock_cutoff");
    const auto back = sc::config_from_keys(kv);
    EXPECT_EQ(back.model.theta, 0.3);
    EXPECT_EQ(back.basin_a, cr::cplx(0.1, -0.2));
    EXPECT_EQ(back.steps, 4);
    EXPECT_TRUE(back.observables.tangle);
    EXPECT_EQ(back.format, sc::OutputFormat::json);
}

TEST(Config, InitialStates) {
    const auto att = parse(kMinimal + "initial.kind = attractor\ninitial.sign = minus\n");
    EXPECT_NEAR(cr::overlap_magnitude(sc::initial_qubit_state(att), cr::attractor_state(cr::AttractorSign::minus, 0.0, 1)),
                1.0, 1e-15);
    const auto spin = parse(kMinimal + "initial.kind = spin_coherent\ninitial.beta_re = 1\n");
    EXPECT_NEAR(std::abs(sc::initial_qubit_state(spin)[0]), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(TimeGrid, InclusiveEndpoints) {
    const auto c = parse(kMinimal + "time.start = 1\ntime.stop = 3\ntime.steps = 5\n");
    const auto t = sc::time_grid(c);
    ASSERT_EQ(t.size(), 5u);
    EXPECT_EQ(t.front(), 1.0);
    EXPECT_EQ(t.back(), 3.0);
    EXPECT_EQ(t[2], 2.0);
}

TEST(TimeExpression, SymbolsAndArithmetic) {
    cr::ModelParams m{2, 1.0, 0.0, 50.0, 0.0, -1};
    EXPECT_NEAR(sc::parse_time_expression("t_star", m), 11.107207345395915, 1e-12);
    EXPECT_NEAR(sc::parse_time_expression("t_r/4", m), 11.107207345395915, 1e-12);
    EXPECT_NEAR(sc::parse_time_expression("2*t_star", m), 22.21441469079183, 1e-12);
    EXPECT_EQ(sc::parse_time_expression("3.5", m), 3.5);
    m.coupling = 2.0;
    // lambda*t is independent of lambda.
    EXPECT_NEAR(sc::parse_time_expression("t_r", m), 44.428829381583662, 1e-12);
    EXPECT_THROW(sc::parse_time_expression("t_q", m), cr::ConfigError);
    EXPECT_THROW(sc::parse_time_expression("t_r/0", m), cr::ConfigError);
}

TEST(Format, ShortestRoundTrip) {
    EXPECT_EQ(sc::format_double(0.1), "0.1");
    EXPECT_EQ(sc::format_double(1.0), "1");
    const double v = 0.12345678901234567;
    EXPECT_EQ(std::stod(sc::format_double(v)), v);
}

TEST(Table, CsvAndJson) {
    sc::Table t;
    t.columns = {"t", "x"};
    t.rows = {{0.0, 0.5}, {1.0, 0.25}};
    EXPECT_EQ(sc::to_csv(t), "t,x\n0,0.5\n1,0.25\n");
    const auto j = sc::to_json(t);
    EXPECT_EQ(j["columns"][1], "x");
    EXPECT_EQ(j["rows"][1][1], 0.25);
    EXPECT_EQ(t.values("x")[0], 0.5);
}

TEST(RunEvolve, FigureOneSample) {
    auto c = sc::load_config(sample("fig1.conf"));
    c.steps = 11;
    c.t_stop = 44.428829381583662;
    const auto r = sc::run_evolve(c);
    ASSERT_EQ(r.table.rows.size(), 11u);
    EXPECT_EQ(r.table.columns.front(), "t");
    EXPECT_NEAR(r.table.values("p_initial")[0], 1.0, 1e-12);
    EXPECT_NEAR(r.table.values("p_attractor_plus")[5], 0.99541, 5e-5);
    EXPECT_EQ(r.metadata["derived"]["fock_cutoff"], 141);
    EXPECT_LT(r.metadata["derived"]["max_leakage"].get<double>(), 1e-8);
    EXPECT_NEAR(r.metadata["derived"]["time_stop_over_t_r"].get<double>(), 1.0, 1e-12);
    EXPECT_EQ(r.metadata["config"]["model.nbar"], "50");
}

TEST(RunEvolve, CouplingRescalesOnlyPhysicalTime) {
    auto c = parse(kMinimal + "time.stop = 20\ntime.steps = 5\n");
    const auto a = sc::run_evolve(c);
    c.model.coupling = 3.0;
    const auto b = sc::run_evolve(c);
    for (std::size_t k = 0; k < a.table.rows.size(); ++k)
        EXPECT_NEAR(a.table.rows[k][1], b.table.rows[k][1], 1e-12);
}

TEST(RunEvolve, ThrowsWhenCutoffTooSmall) {
    EXPECT_THROW(sc::run_evolve(sc::load_config(sample("too-small-cutoff.conf"))), cr::CutoffTooSmall);
}

TEST(RunEvolve, TangleColumnForTwoQubits) {
    auto c = sc::load_config(sample("fig2.conf"));
    c.steps = 3;
    c.t_stop = 1.0;
    const auto r = sc::run_evolve(c);
    EXPECT_NEAR(r.table.values("tangle")[0], 1.0, 1e-6);
}

TEST(LoadConfig, AcceptsSidecar) {
    auto c = sc::load_config(sample("fig2.conf"));
    c.steps = 2;
    c.t_stop = 1.0;
    const auto r = sc::run_evolve(c);
    const std::string path = testing::TempDir() + "cavrevive_sidecar.meta.json";
    std::ofstream(path) << r.metadata.dump(2);
    const auto back = sc::load_config(path);
    EXPECT_EQ(back.model.n_qubits, 2);
    EXPECT_EQ(back.model.fock_cutoff, 141);
    EXPECT_EQ(back.initial, sc::InitialKind::basin);
    EXPECT_EQ(back.steps, 2);
    std::remove(path.c_str());
    EXPECT_THROW(sc::load_config(sample("missing.conf")), cr::ConfigError);
}

TEST(RunTimes, Json) {
    const auto j = sc::run_times({1, 1.0, 0.0, 50.0, 0.0, -1});
    EXPECT_NEAR(j["t_revival"].get<double>(), 44.428829381583662, 1e-12);
    EXPECT_THROW(sc::run_times({1, 1.0, 0.0, 0.0, 0.0, -1}), cr::InvalidParameter);
}

TEST(RunQfunc, FieldAndSpinTables) {
    const auto c = parse("model.n_qubits = 2\nmodel.nbar = 9\n");
    const auto f = sc::run_qfunc(c, 0.0, sc::QKind::field, 41);
    EXPECT_EQ(f.table.rows.size(), 41u * 41u);
    EXPECT_EQ(f.table.columns[2], "q");
    EXPECT_NEAR(f.metadata["radial_scale"].get<double>(), 3.0, 1e-15);
    EXPECT_EQ(f.metadata["lobes_at_half_max"].size(), 1u);
    const auto s = sc::run_qfunc(c, 0.0, sc::QKind::spin, 21);
    EXPECT_EQ(s.table.rows.size(), 21u * 41u);
    EXPECT_NEAR(s.metadata["integral"].get<double>(), 1.0, 0.01);
    EXPECT_THROW(sc::run_qfunc(c, 0.0, sc::QKind::field, 1), cr::ConfigError);
}

TEST(BasinScan, SamplesCoverDisc) {
    const auto as = sc::basin_samples(2, 50);
    ASSERT_EQ(as.size(), 50u);
    for (const auto& a : as) EXPECT_LE(std::abs(a), cr::basin_radius(2) * (1 + 1e-12));
    EXPECT_NEAR(std::abs(as[0]), cr::basin_radius(2), 1e-15);
}

TEST(BasinScan, TwoQubitTable) {
    const auto t = sc::run_basin_scan({2, 1.0, 0.0, 50.0, 0.0, -1}, 8);
    ASSERT_EQ(t.columns.size(), 5u);
    EXPECT_EQ(t.columns[2], "tau");
    EXPECT_NEAR(t.rows[0][2], 1.0, 1e-12);
    EXPECT_NEAR(t.rows[1][2], 0.0, 1e-12);
    for (const auto& row : t.rows) EXPECT_GT(row[3], 0.85);
    EXPECT_EQ(sc::run_basin_scan({3, 1.0, 0.0, 20.0, 0.0, -1}, 4).columns.size(), 4u);
}
