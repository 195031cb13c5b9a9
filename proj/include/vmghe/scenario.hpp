/*
 * Copyright 2026 The VMGHE Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VMGHE_SCENARIO_HPP
#define VMGHE_SCENARIO_HPP

#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "vmghe/protocol.hpp"

namespace vmghe::cli {

using json = nlohmann::json;
inline constexpr int kReportVersion = 1;

// A scenario file drives one full protocol run: session shape, program,
// input assignments and an optional tamper directive. Structured text with
// [session], [groups], [program], [inputs] and [tamper] sections:
//
//   name = mkhe_mul
//   [session]
//   preset = TEST-M
//   mode = crs
//   seed = 1
//   [groups]
//   G1 = alice
//   G2 = bob
//   [program]
//   f = x * y
//   [inputs]
//   x = 123 @ G1
//   y = 45 @ G2
//   [tamper]
//   kind = none
struct Scenario {
    std::string name = "scenario";
    protocol::SessionConfig session;
    std::string program_source;
    LabeledProgram program;
    std::vector<protocol::SessionInput> inputs;  // ordered like program.labels
    protocol::TamperKind tamper = protocol::TamperKind::None;

    static Scenario from_stream(std::istream& in, const std::string& default_name = "scenario") {
        Scenario sc;
        sc.name = default_name;
        std::map<std::string, u32> group_ids;
        u32 next_party = 1;
        struct RawInput {
            std::string label;
            u64 value;
            std::string group;
        };
        std::vector<RawInput> raw_inputs;
        std::string tamper_kind = "none";

        std::string section;
        std::string line;
        auto trim = [](std::string v) {
            size_t b = v.find_first_not_of(" \t\r");
            size_t e = v.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
        };
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[' && line.back() == ']') {
                section = line.substr(1, line.size() - 2);
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("scenario: expected 'key = value': " + line);
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));

            if (section.empty() && key == "name") {
                sc.name = value;
            } else if (section == "session") {
                if (key == "preset") {
                    sc.session.preset = value;
                } else if (key == "mode") {
                    sc.session.mode = mode_from_string(value);
                } else if (key == "lambda") {
                    sc.session.lambda = static_cast<u32>(std::stoul(value));
                } else if (key == "seed") {
                    sc.session.master_seed = std::stoull(value);
                } else {
                    throw std::invalid_argument("scenario: unknown session key '" + key + "'");
                }
            } else if (section == "groups") {
                protocol::GroupSpec g;
                g.id = static_cast<u32>(sc.session.groups.size() + 1);
                group_ids.emplace(key, g.id);
                std::istringstream members(value);
                std::string member;
                while (members >> member) g.parties.push_back(next_party++);
                sc.session.groups.push_back(std::move(g));
            } else if (section == "program") {
                sc.program_source = value;
            } else if (section == "inputs") {
                auto at = value.find('@');
                if (at == std::string::npos) {
                    throw std::invalid_argument("scenario: input needs 'value @ GROUP': " + line);
                }
                RawInput ri;
                ri.label = key;
                ri.value = std::stoull(trim(value.substr(0, at)));
                ri.group = trim(value.substr(at + 1));
                raw_inputs.push_back(std::move(ri));
            } else if (section == "tamper") {
                if (key != "kind") throw std::invalid_argument("scenario: unknown tamper key '" + key + "'");
                tamper_kind = value;
            } else {
                throw std::invalid_argument("scenario: unknown section '" + section + "'");
            }
        }

        if (sc.program_source.empty()) throw std::invalid_argument("scenario: missing [program] section");
        sc.program = parse_program(sc.program_source);
        sc.tamper = protocol::tamper_from_string(tamper_kind);
        sc.session.validate();

        // inputs must cover the program labels exactly, in label order
        for (const auto& label : sc.program.labels) {
            bool found = false;
            for (const auto& ri : raw_inputs) {
                if (ri.label != label) continue;
                if (found) throw std::invalid_argument("scenario: duplicate input for '" + label + "'");
                auto git = group_ids.find(ri.group);
                if (git == group_ids.end()) {
                    throw std::invalid_argument("scenario: input '" + label + "' names unknown group " +
                                                ri.group);
                }
                sc.inputs.push_back(protocol::SessionInput{label, ri.value, git->second});
                found = true;
            }
            if (!found) throw std::invalid_argument("scenario: no input for label '" + label + "'");
        }
        if (raw_inputs.size() != sc.program.labels.size()) {
            throw std::invalid_argument("scenario: extra inputs not used by the program");
        }
        return sc;
    }

    static Scenario from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("scenario: cannot open " + path);
        std::string base = path;
        auto slash = base.find_last_of('/');
        if (slash != std::string::npos) base = base.substr(slash + 1);
        auto dot = base.find_last_of('.');
        if (dot != std::string::npos) base = base.substr(0, dot);
        return from_stream(in, base);
    }
};

struct RunOutcome {
    int exit_code = 0;
    json report;
    protocol::SessionResult result;
};

// Executes keygen -> setgen -> session -> distributed decrypt -> verify.
// A verdict of "reject" is a correct outcome (exit 0, flagged in the
// report); protocol errors exit nonzero.
inline RunOutcome cmd_run(const Scenario& sc) {
    RunOutcome out;
    out.result = protocol::run_session(sc.session, sc.program, sc.inputs, sc.tamper);
    const auto& r = out.result;
    out.report = json{
        {"report_version", kReportVersion},
        {"scenario", sc.name},
        {"program", sc.program_source},
        {"preset", sc.session.preset},
        {"mode", to_string(sc.session.mode)},
        {"seed", sc.session.master_seed},
        {"tamper", to_string(sc.tamper)},
        {"verdict", to_string(r.verdict.status)},
        {"accepted", r.verdict.accepted()},
        {"rejected", !r.verdict.accepted()},
        {"value", r.verdict.accepted() ? json(r.verdict.value()) : json(nullptr)},
        {"expected", r.expected},
        {"oracle_match", r.oracle_match},
        {"noise", r.noise.str()},
        {"noise_budget", r.noise_budget.str()},
        {"setgen_attempts", r.setgen_attempts},
        {"transcript_digest", to_hex(r.transcript.digest())},
        {"timings_ms",
         json{{"keygen", r.keygen_ms},
              {"setgen", r.setgen_ms},
              {"eval", r.eval_ms},
              {"decrypt", r.decrypt_ms},
              {"verify", r.verify_ms}}},
    };
    out.exit_code = 0;
    return out;
}

// 99% Wilson score interval.
struct WilsonInterval {
    double low = 0;
    double high = 0;

    static WilsonInterval compute(u64 successes, u64 trials, double z = 2.5758293) {
        double n = static_cast<double>(trials);
        double phat = static_cast<double>(successes) / n;
        double z2 = z * z;
        double denom = 1.0 + z2 / n;
        double center = phat + z2 / (2 * n);
        double spread = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n));
        return WilsonInterval{(center - spread) / denom, (center + spread) / denom};
    }

    bool contains(double p) const { return p >= low && p <= high; }
};

inline double binomial_coefficient(u32 n, u32 k) {
    long double acc = 1;
    for (u32 i = 1; i <= k; ++i) acc = acc * static_cast<long double>(n - k + i) / i;
    return static_cast<double>(acc);
}

struct StatsOutcome {
    int exit_code = 0;
    json report;
    u64 detections = 0;
    u64 escapes = 0;
    u64 errors = 0;
};

// Repeats the scenario over independent seeds and reports the empirical
// detection rate with a Wilson interval against the combinatorial guessing
// bound 1 - 1/C(lambda, lambda/2). Rejection under tamper is the success
// condition here; acceptance of a tampered result is an escape.
inline StatsOutcome cmd_stats(const Scenario& sc, u32 trials, u32 threads = 0) {
    if (trials < 30) throw std::invalid_argument("stats: needs at least 30 trials");
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    std::vector<int> verdicts(trials, -1);  // 1 detected, 0 escaped, -1 error
    std::atomic<u32> next{0};
    auto worker = [&]() {
        for (;;) {
            u32 t = next.fetch_add(1);
            if (t >= trials) return;
            Scenario trial = sc;
            trial.session.master_seed = sc.session.master_seed + t;
            try {
                auto res = protocol::run_session(trial.session, trial.program, trial.inputs,
                                                 trial.tamper);
                verdicts[t] = res.verdict.accepted() ? 0 : 1;
            } catch (const std::exception&) {
                verdicts[t] = -1;
            }
        }
    };
    std::vector<std::thread> pool;
    for (u32 i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    StatsOutcome out;
    for (int v : verdicts) {
        if (v == 1) ++out.detections;
        else if (v == 0) ++out.escapes;
        else ++out.errors;
    }
    u64 decided = out.detections + out.escapes;
    double detection_rate = decided == 0 ? 0.0 : static_cast<double>(out.detections) / decided;
    double escape_rate = decided == 0 ? 0.0 : static_cast<double>(out.escapes) / decided;
    u32 lambda = sc.session.lambda != 0
                     ? sc.session.lambda
                     : PresetSpec::by_name(sc.session.preset).lambda;
    double guess_escape = 1.0 / binomial_coefficient(lambda, lambda / 2);
    WilsonInterval wilson = WilsonInterval::compute(out.escapes, std::max<u64>(decided, 1));

    out.report = json{
        {"report_version", kReportVersion},
        {"scenario", sc.name},
        {"tamper", to_string(sc.tamper)},
        {"trials", trials},
        {"errors", out.errors},
        {"detections", out.detections},
        {"escapes", out.escapes},
        {"detection_rate", detection_rate},
        {"escape_rate", escape_rate},
        {"wilson99_escape_low", wilson.low},
        {"wilson99_escape_high", wilson.high},
        {"lambda", lambda},
        {"guessing_escape_bound", guess_escape},
        {"detection_bound", 1.0 - guess_escape},
        {"bound_within_interval", wilson.contains(guess_escape)},
    };
    out.exit_code = out.errors == 0 ? 0 : 2;
    return out;
}

struct BenchOutcome {
    int exit_code = 0;
    json report;
};

// Times the pipeline stages on a preset; correctness is not asserted here.
inline BenchOutcome cmd_bench(const std::string& preset, SchemeMode mode, u64 seed) {
    using clock = std::chrono::steady_clock;
    auto time_ms = [](auto&& fn) {
        auto t0 = clock::now();
        fn();
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };

    protocol::SessionConfig cfg;
    cfg.groups = {protocol::GroupSpec{1, {1, 2}}, protocol::GroupSpec{2, {3, 4}}};
    cfg.preset = preset;
    cfg.mode = mode;
    cfg.master_seed = seed;

    protocol::Transcript t;
    t.set_session_digest(cfg.digest());
    protocol::KeygenResult kg;
    double keygen_ms = time_ms([&] { kg = protocol::run_keygen(cfg, t); });
    protocol::SetGenResult sg;
    double setgen_ms = time_ms([&] { sg = protocol::run_setgen(cfg, kg, t); });

    const PublicParams& pp = *kg.pp;
    Prf prf = Prf::from_seed(seed, "bench-prf");
    SessionRegistry registry;
    auto& p1 = kg.party(1);
    Authenticator ax, ay;
    double auth_ms = time_ms([&] {
        ax = auth(17, "x", kg.keys.at(1), sg.set, prf, pp, p1.sampler, registry);
        ay = auth(29, "y", kg.keys.at(2), sg.set, prf, pp, kg.party(3).sampler, registry);
    });
    auth_ms /= 2;

    LabeledProgram add_prog = parse_program("x + y");
    LabeledProgram mul_prog = parse_program("x * y");
    std::vector<Authenticator> ins{ax, ay};
    Authenticator sum, prod;
    double add_ms = time_ms([&] { sum = eval_authenticated(add_prog, ins, kg.keys, pp); });
    double mul_ms = time_ms([&] { prod = eval_authenticated(mul_prog, ins, kg.keys, pp); });

    std::vector<u64> coeffs;
    double decrypt_ms =
        time_ms([&] { coeffs = protocol::run_distributed_decrypt(cfg, kg, sum.ct, t); });
    DecryptFn already = [&coeffs](const MultigroupCiphertext&) { return coeffs; };
    double verify_ms = time_ms([&] { verify(add_prog, sum, sg.set, prf, already, pp); });

    json rows = json::array();
    auto row = [&rows](const std::string& op, double ms) {
        rows.push_back(json{{"op", op}, {"ms", ms}});
    };
    row("keygen", keygen_ms);
    row("setgen", setgen_ms);
    row("auth", auth_ms);
    row("eval_add", add_ms);
    row("eval_mul", mul_ms);
    row("distributed_decrypt", decrypt_ms);
    row("verify", verify_ms);

    BenchOutcome out;
    out.report = json{{"report_version", kReportVersion},
                      {"preset", preset},
                      {"mode", to_string(mode)},
                      {"seed", seed},
                      {"rows", rows}};
    return out;
}

}  // namespace vmghe::cli

#endif  // VMGHE_SCENARIO_HPP
