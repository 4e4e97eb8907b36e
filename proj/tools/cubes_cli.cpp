#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "slidingcubes/formats.hpp"
#include "slidingcubes/hardness.hpp"
#include "slidingcubes/oracle.hpp"
#include "slidingcubes/planner.hpp"

using json = nlohmann::json;

namespace {

// exit codes: 0 success, 1 semantic failure, 2 parse or I/O failure
constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kIoError = 2;

sc::MonotoneFormula parse_formula_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    sc::MonotoneFormula out;
    std::string line;
    size_t lineno = 0;
    int max_var = 0;
    while (std::getline(f, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) continue;
        if (first == "p") continue;  // optional header
        if (first == "c" || first[0] == '#') continue;
        std::vector<int> clause;
        ss.clear();
        ss.str(line);
        int lit;
        while (ss >> lit) {
            if (lit == 0) break;  // DIMACS-style terminator tolerated
            clause.push_back(lit);
            max_var = std::max(max_var, std::abs(lit));
        }
        if (!clause.empty()) out.clauses.push_back(std::move(clause));
    }
    out.num_vars = max_var;
    if (out.num_vars == 0) throw sc::ParseError("no clauses found", lineno);
    return out;
}

int cmd_verify(CLI::App* app) {
    auto initial = app->get_option("--initial")->as<std::string>();
    auto schedule = app->get_option("--schedule")->as<std::string>();
    auto final_path = app->get_option("--final")->as<std::string>();
    auto report = app->get_option("--report")->as<std::string>();

    sc::Configuration c1 = sc::read_configuration_file(initial);
    sc::Configuration c2 = sc::read_configuration_file(final_path);
    sc::Schedule sched = sc::read_schedule_file(schedule);

    auto err = sc::validate_schedule(c1, sched, c2);
    if (report == "json") {
        json j;
        j["report_version"] = 1;
        j["valid"] = !err.has_value();
        j["makespan"] = sched.makespan();
        if (err) {
            j["step"] = err->step + 1;
            if (!err->violations.empty()) {
                j["rule"] = sc::rule_name(err->violations.front().rule);
                j["moves"] = err->violations.front().moves;
                if (!err->violations.front().detail.empty())
                    j["detail"] = err->violations.front().detail;
            } else {
                j["rule"] = err->detail;
            }
        }
        std::cout << j.dump(2) << "\n";
    } else {
        if (!err) {
            std::cout << "valid: makespan " << sched.makespan() << "\n";
        } else if (err->violations.empty()) {
            std::cout << "invalid: " << err->detail << "\n";
        } else {
            std::cout << "invalid at step " << (err->step + 1) << ": "
                      << sc::rule_name(err->violations.front().rule);
            if (!err->violations.front().detail.empty())
                std::cout << " (" << err->violations.front().detail << ")";
            std::cout << "\n";
        }
    }
    return err ? kFail : kOk;
}

int cmd_plan(CLI::App* app) {
    auto from = app->get_option("--from")->as<std::string>();
    auto to = app->get_option("--to")->as<std::string>();
    auto out = app->get_option("--out")->as<std::string>();
    sc::PlanOptions opts;
    opts.seed = app->get_option("--seed")->as<uint64_t>();
    opts.fallback_threshold = app->get_option("--fallback-threshold")->as<size_t>();

    sc::Configuration c1 = sc::read_configuration_file(from);
    sc::Configuration c2 = sc::read_configuration_file(to);
    if (c1.size() != c2.size()) {
        std::cerr << "error: module counts differ\n";
        return kFail;
    }
    sc::PlanReport rep = sc::plan(c1, c2, opts);
    sc::write_schedule_file(out, rep.schedule);

    json j;
    j["report_version"] = 1;
    j["n"] = rep.n;
    j["area"] = rep.area;
    j["height"] = rep.height;
    j["makespan"] = rep.makespan;
    j["ratio"] = rep.ratio;
    j["fallback"] = rep.used_fallback;
    j["phases"] = {{"gather_end", rep.gather_end},
                   {"compress_end", rep.compress_end},
                   {"compact_end", rep.compact_end},
                   {"bridge_end", rep.bridge_end}};
    j["seed"] = opts.seed;
    std::cout << j.dump(2) << "\n";
    return kOk;
}

int cmd_gen_sat(CLI::App* app) {
    auto formula = app->get_option("--formula")->as<std::string>();
    auto out_initial = app->get_option("--out-initial")->as<std::string>();
    auto out_final = app->get_option("--out-final")->as<std::string>();
    auto assignment_str = app->get_option("--assignment")->as<std::string>();
    auto out_schedule = app->get_option("--out-schedule")->as<std::string>();

    sc::MonotoneFormula f = parse_formula_file(formula);
    sc::SatInstance inst = sc::gen_sat_instance(f);
    sc::write_configuration_file(out_initial, inst.c_initial);
    sc::write_configuration_file(out_final, inst.c_final);

    json j;
    j["report_version"] = 1;
    j["variables"] = f.num_vars;
    j["clauses"] = f.clauses.size();
    j["cells"] = inst.c_initial.size();

    if (!assignment_str.empty()) {
        if (out_schedule.empty()) {
            std::cerr << "error: --assignment requires --out-schedule\n";
            return kFail;
        }
        std::vector<bool> assignment;
        for (char ch : assignment_str) {
            if (ch == '1' || ch == 'T' || ch == 't') assignment.push_back(true);
            else if (ch == '0' || ch == 'F' || ch == 'f') assignment.push_back(false);
            else if (ch == ',' || ch == ' ') continue;
            else {
                std::cerr << "error: bad assignment character '" << ch << "'\n";
                return kIoError;
            }
        }
        sc::Schedule sched = sc::assignment_to_schedule(inst, assignment);
        sc::write_schedule_file(out_schedule, sched);
        j["schedule_makespan"] = sched.makespan();
    }
    std::cout << j.dump(2) << "\n";
    return kOk;
}

int cmd_oracle(CLI::App* app) {
    auto a = app->get_option("--a")->as<std::string>();
    auto bpath = app->get_option("--b")->as<std::string>();
    sc::OracleOptions opts;
    opts.step_budget = app->get_option("--max-steps")->as<size_t>();
    opts.move_budget_per_step = app->get_option("--max-parallel")->as<size_t>();

    sc::Configuration c1 = sc::read_configuration_file(a);
    sc::Configuration c2 = sc::read_configuration_file(bpath);
    if (c1.size() != c2.size()) {
        std::cerr << "error: module counts differ\n";
        return kFail;
    }
    sc::OracleResult res = sc::bfs_min_makespan(c1, c2, opts);
    if (res.known)
        std::cout << res.makespan << "\n";
    else
        std::cout << "unknown(budget)\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parallel sliding cubes: planning, validation and instance generation"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "validate a schedule between two configurations");
    verify->add_option("--initial", "initial configuration file")->required();
    verify->add_option("--schedule", "schedule file")->required();
    verify->add_option("--final", "final configuration file")->required();
    verify->add_option("--report", "report format: text or json")->default_val("text");

    auto* planc = app.add_subcommand("plan", "plan a reconfiguration schedule");
    planc->add_option("--from", "initial configuration file")->required();
    planc->add_option("--to", "target configuration file")->required();
    planc->add_option("--out", "output schedule file")->required();
    planc->add_option("--seed", "seed recorded in the report")->default_val("0");
    planc->add_option("--fallback-threshold", "modules below which the melt fallback runs")
        ->default_val("2625");

    auto* gen = app.add_subcommand("gen-sat", "generate a hardness instance from a formula");
    gen->add_option("--formula", "clause list file, one clause per line")->required();
    gen->add_option("--out-initial", "output initial configuration")->required();
    gen->add_option("--out-final", "output target configuration")->required();
    gen->add_option("--assignment", "assignment bits, e.g. 1010")->default_val("");
    gen->add_option("--out-schedule", "output schedule for the assignment")->default_val("");

    auto* oracle = app.add_subcommand("oracle", "exact minimum makespan for small instances");
    oracle->add_option("--a", "first configuration")->required();
    oracle->add_option("--b", "second configuration")->required();
    oracle->add_option("--max-steps", "step budget")->default_val("8");
    oracle->add_option("--max-parallel", "moves per step budget")->default_val("4");

    try {
        app.parse(argc, argv);
        if (verify->parsed()) return cmd_verify(verify);
        if (planc->parsed()) return cmd_plan(planc);
        if (gen->parsed()) return cmd_gen_sat(gen);
        if (oracle->parsed()) return cmd_oracle(oracle);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kIoError : kIoError;
    } catch (const sc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    return kOk;
}
