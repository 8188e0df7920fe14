#include "etgossip/config.hpp"

#include "etgossip/common.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace etg {

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "n", "d", "T", "sparsity", "edge_count", "seed", "reps", "eta", "case", "init.scale", "output",
    "policy.kind", "policy.schedule", "policy.tau0", "policy.epsilon", "policy.kp", "policy.p_link",
    "policy.p_k", "objective.kind", "objective.spread", "objective.alpha", "objective.samples",
    "objective.skew", "objective.lambda", "objective.batch",
};

const std::set<std::string, std::less<>> kScheduleKinds = {"zero", "constant", "sqrt_decay",
                                                           "linear_decay", "relative"};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

class Reader {
public:
    explicit Reader(std::map<std::string, std::string, std::less<>> values) : values_(std::move(values)) {}

    bool has(std::string_view key) const { return values_.find(key) != values_.end(); }

    void require(std::string_view key, std::string_view why = {}) {
        if (!has(key)) {
            std::string msg = "missing required key '" + std::string(key) + "'";
            if (!why.empty()) msg += " (" + std::string(why) + ")";
            errors_.push_back(std::move(msg));
        }
    }

    template <typename T>
    void read(std::string_view key, T& target) {
        const auto it = values_.find(key);
        if (it == values_.end()) return;
        const std::string& raw = it->second;
        if constexpr (std::is_same_v<T, std::string>) {
            target = raw;
        } else {
            T value{};
            const auto* begin = raw.data();
            const auto* end = raw.data() + raw.size();
            const auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc() || ptr != end || raw.empty()) {
                errors_.push_back("key '" + std::string(key) + "': cannot parse '" + raw + "' as " +
                                  (std::is_floating_point_v<T> ? "a number" : "a nonnegative integer"));
                return;
            }
            target = value;
        }
    }

    template <typename T>
    void read(std::string_view key, std::optional<T>& target) {
        if (!has(key)) return;
        T value{};
        const auto before = errors_.size();
        read(key, value);
        if (errors_.size() == before) target = value;
    }

    void fail(std::string msg) { errors_.push_back(std::move(msg)); }
    std::vector<std::string>& errors() { return errors_; }

private:
    std::map<std::string, std::string, std::less<>> values_;
    std::vector<std::string> errors_;
};

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    std::map<std::string, std::string, std::less<>> values;
    std::vector<std::string> syntax_errors;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto newline = text.find('\n');
        std::string_view line = text.substr(0, newline);
        text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "line " + std::to_string(line_no);
        if (eq == std::string_view::npos) {
            syntax_errors.push_back(where + ": expected key=value");
            continue;
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) {
            syntax_errors.push_back(where + ": empty key");
        } else if (!kKnownKeys.contains(key)) {
            syntax_errors.push_back(where + ": unknown key '" + key + "'");
        } else if (!values.emplace(key, value).second) {
            syntax_errors.push_back(where + ": duplicate key '" + key + "'");
        }
    }

    Reader r(std::move(values));
    r.errors() = std::move(syntax_errors);
    ExperimentConfig cfg;

    r.require("n");
    r.require("d");
    r.require("T");
    r.require("policy.kind");
    r.read("n", cfg.n);
    r.read("d", cfg.d);
    r.read("T", cfg.rounds);
    r.read("sparsity", cfg.sparsity);
    r.read("edge_count", cfg.edge_count);
    r.read("seed", cfg.seed);
    r.read("reps", cfg.reps);
    r.read("eta", cfg.eta);
    r.read("init.scale", cfg.init_scale);
    r.read("output", cfg.output);

    if (r.has("case")) {
        std::string which;
        r.read("case", which);
        if (which == "A") cfg.stepsize_case = StepsizeCase::A;
        else if (which == "B") cfg.stepsize_case = StepsizeCase::B;
        else if (which == "C") cfg.stepsize_case = StepsizeCase::C;
        else r.fail("key 'case': expected A, B or C, got '" + which + "'");
    }
    if (r.has("eta") == r.has("case")) r.fail("exactly one of 'eta' or 'case' must be given");

    auto& p = cfg.policy;
    r.read("policy.kind", p.kind);
    r.read("policy.schedule", p.schedule);
    r.read("policy.tau0", p.tau0);
    r.read("policy.epsilon", p.epsilon);
    r.read("policy.kp", p.kp);
    r.read("policy.p_link", p.p_link);
    r.read("policy.p_k", p.p_k);

    std::string schedule = p.kind;
    if (p.kind == "full") {
        schedule = "zero";
    } else if (p.kind == "event_triggered") {
        schedule = p.schedule;
        if (!kScheduleKinds.contains(schedule)) r.fail("key 'policy.schedule': unknown schedule '" + schedule + "'");
    } else if (p.kind == "periodic") {
        r.require("policy.kp", "periodic policy");
    } else if (p.kind == "probabilistic") {
        r.require("policy.p_link", "probabilistic policy");
    } else if (p.kind == "variable_working") {
        r.require("policy.p_k", "variable_working policy");
    } else if (!kScheduleKinds.contains(p.kind) && r.has("policy.kind")) {
        r.fail("key 'policy.kind': unknown policy '" + p.kind + "'");
    }
    if (kScheduleKinds.contains(schedule) &&
        (p.kind == "event_triggered" || kScheduleKinds.contains(p.kind))) {
        if (schedule == "constant" || schedule == "sqrt_decay" || schedule == "linear_decay") {
            r.require("policy.tau0", schedule + " threshold");
        } else if (schedule == "relative") {
            r.require("policy.epsilon", "relative threshold");
        }
    }

    auto& o = cfg.objective;
    r.read("objective.kind", o.kind);
    r.read("objective.spread", o.spread);
    r.read("objective.alpha", o.alpha);
    r.read("objective.samples", o.samples);
    r.read("objective.skew", o.skew);
    r.read("objective.lambda", o.lambda);
    r.read("objective.batch", o.batch);
    if (o.kind != "quadratic" && o.kind != "logistic") {
        r.fail("key 'objective.kind': expected quadratic or logistic, got '" + o.kind + "'");
    }

    if (r.has("n") && cfg.n < 2) r.fail("key 'n': need at least 2 nodes");
    if (r.has("d") && cfg.d < 1) r.fail("key 'd': need d >= 1");
    if (r.has("T") && cfg.rounds < 1) r.fail("key 'T': need at least 1 round");
    if (cfg.reps < 1) r.fail("key 'reps': need at least 1 repetition");
    if (cfg.eta && !(*cfg.eta > 0.0)) r.fail("key 'eta': must be positive");
    if (!(cfg.sparsity >= 0.0 && cfg.sparsity < 1.0)) r.fail("key 'sparsity': must lie in [0, 1)");
    if (p.kp < 1) r.fail("key 'policy.kp': must be at least 1");
    if (!(p.p_link >= 0.0 && p.p_link <= 1.0)) r.fail("key 'policy.p_link': must lie in [0, 1]");
    if (!(p.p_k >= 0.0 && p.p_k <= 1.0)) r.fail("key 'policy.p_k': must lie in [0, 1]");
    if (p.tau0 < 0.0) r.fail("key 'policy.tau0': must be nonnegative");
    if (p.epsilon < 0.0) r.fail("key 'policy.epsilon': must be nonnegative");
    if (o.alpha < 0.0) r.fail("key 'objective.alpha': must be nonnegative");
    if (o.spread < 0.0) r.fail("key 'objective.spread': must be nonnegative");
    if (o.batch < 1) r.fail("key 'objective.batch': must be at least 1");
    if (o.samples < 1) r.fail("key 'objective.samples': must be at least 1");
    if (cfg.init_scale < 0.0) r.fail("key 'init.scale': must be nonnegative");
    if (cfg.stepsize_case && o.kind != "quadratic") {
        r.fail("key 'case': prescribed stepsizes need the quadratic objective");
    }

    if (!r.errors().empty()) {
        std::ostringstream msg;
        msg << "invalid configuration:";
        for (const auto& e : r.errors()) msg << "\n  " << e;
        throw ConfigError(msg.str());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

CommunicationPolicy make_policy(const PolicyConfig& p, std::size_t n) {
    if (p.kind == "periodic") return CommunicationPolicy::periodic(p.kp);
    if (p.kind == "probabilistic") return CommunicationPolicy::probabilistic(n, p.p_link);
    if (p.kind == "variable_working") return CommunicationPolicy::variable_working(p.p_k);

    const std::string& name = p.kind == "event_triggered" ? p.schedule : p.kind;
    ThresholdSchedule s;
    s.tau0 = p.tau0;
    s.epsilon = p.epsilon;
    if (name == "zero" || name == "full") s.kind = ScheduleKind::zero;
    else if (name == "constant") s.kind = ScheduleKind::constant;
    else if (name == "sqrt_decay") s.kind = ScheduleKind::sqrt_decay;
    else if (name == "linear_decay") s.kind = ScheduleKind::linear_decay;
    else if (name == "relative") s.kind = ScheduleKind::relative;
    else throw ConfigError("unknown policy '" + p.kind + "'");
    return CommunicationPolicy::event_triggered(s);
}

}  // namespace etg
