#include "arqsec/harness/experiments.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "arqsec/adversary/outage_mc.hpp"
#include "arqsec/adversary/wifi_eve.hpp"
#include "arqsec/analysis/closed_form.hpp"
#include "arqsec/analysis/enumeration.hpp"
#include "arqsec/analysis/tradeoff.hpp"
#include "arqsec/channel.hpp"
#include "arqsec/rfid/protocol.hpp"
#include "arqsec/wifi/overlay.hpp"

namespace arqsec::harness {
namespace {

using nlohmann::json;

Cell I(std::int64_t v) { return Cell{v}; }
Cell D(double v) { return Cell{v}; }
Cell S(std::string v) { return Cell{std::move(v)}; }

/// Override lookup that records effective values and rejects unknown keys.
class Params {
  public:
    explicit Params(const json& overrides) : overrides_(overrides)
    {
        if (!overrides_.is_object()) {
            throw ConfigError("experiment parameters must be a JSON object");
        }
    }

    template <typename T>
    T get(const std::string& key, T fallback)
    {
        used_.insert(key);
        T value = fallback;
        if (overrides_.contains(key)) {
            try {
                value = overrides_.at(key).get<T>();
            } catch (const json::exception&) {
                throw ConfigError("parameter \"" + key + "\" has the wrong type");
            }
        }
        resolved_[key] = value;
        return value;
    }

    double prob(const std::string& key, double fallback)
    {
        const double v = get<double>(key, fallback);
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ConfigError("parameter \"" + key + "\" must lie in [0, 1]");
        }
        return v;
    }

    unsigned positive(const std::string& key, unsigned fallback)
    {
        const auto v = get<long long>(key, fallback);
        if (v < 1) {
            throw ConfigError("parameter \"" + key + "\" must be >= 1");
        }
        return static_cast<unsigned>(v);
    }

    void finish() const
    {
        for (const auto& [key, _] : overrides_.items()) {
            if (!used_.count(key)) {
                throw ConfigError("unknown parameter \"" + key + "\"");
            }
        }
    }

    const json& resolved() const { return resolved_; }

  private:
    json overrides_;
    json resolved_ = json::object();
    std::set<std::string> used_;
};

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index)
{
    return mix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
}

unsigned check_ell(unsigned ell)
{
    if (ell < 1 || ell > 32) {
        throw ConfigError("ell must be in [1, 32]");
    }
    return ell;
}

ResultTable make_table(const ExperimentConfig& cfg, std::vector<std::string> columns)
{
    ResultTable t;
    t.name = cfg.name;
    t.columns = std::move(columns);
    return t;
}

void finish_meta(ResultTable& t, const ExperimentConfig& cfg, const Params& p, std::optional<std::uint64_t> trials)
{
    p.finish();
    t.meta = json{{"experiment", cfg.name},
                  {"seed", cfg.seed},
                  {"trials", trials ? json(*trials) : json(nullptr)},
                  {"params", p.resolved()},
                  {"columns", t.columns},
                  {"tool_version", kToolVersion}};
}

ResultTable fig2(const ExperimentConfig& cfg)
{
    Params p(cfg.overrides);
    const double g_ab = p.prob("gamma_ab", 0.005);
    const double g_ba = p.prob("gamma_ba", 0.009);
    const double g_ae = p.prob("gamma_ae", 0.004);
    const double g_be = p.prob("gamma_be", g_ae);
    const auto big_n = p.get<std::uint64_t>("N", 100000);
    const auto ns = p.get<std::vector<unsigned>>("n_values", {2, 10, 20, 50, 100, 200});
    const auto suite = wifi::parse_suite(p.get<std::string>("suite", "wep"));
    const double minutes = p.get<double>("baseline_minutes", analysis::kBaselineMinutes);
    const std::uint64_t trials = cfg.trials.value_or(1000);

    ChannelSpec spec;
    spec.set(LinkId(kAlice, kBob), g_ab).set(LinkId(kBob, kAlice), g_ba);
    spec.set(LinkId(kAlice, kEve), g_ae).set(LinkId(kBob, kEve), g_be);

    ResultTable t = make_table(cfg, {"n", "init_overhead", "closed_form", "mc_mean_u_omniscient",
                                     "mc_se_omniscient", "mc_mean_u_observed", "mc_se_observed",
                                     "attack_years_omniscient", "attack_years_observed"});
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const unsigned n = ns[i];
        if (n < 2 || n % 2 != 0) {
            throw ConfigError("n_values must be even and >= 2");
        }
        wifi::SessionConfig sc;
        sc.n = n;
        sc.data_frames = big_n;
        sc.suite = suite;
        sc.init_budget = std::max<std::uint64_t>(1000, 20ULL * n);
        const auto omni = adversary::simulate_useful_frames(sc, spec, adversary::AckKnowledge::Omniscient, trials,
                                                            point_seed(cfg.seed, i), cfg.workers);
        const auto obs = adversary::simulate_useful_frames(sc, spec, adversary::AckKnowledge::Observed, trials,
                                                           point_seed(cfg.seed, i), cfg.workers);
        const auto e_omni = analysis::attack_effort(omni.mean, static_cast<double>(big_n),
                                                    analysis::kBaselineFrames, minutes);
        const auto e_obs =
            analysis::attack_effort(obs.mean, static_cast<double>(big_n), analysis::kBaselineFrames, minutes);
        t.add_row({I(n), D(static_cast<double>(n) / static_cast<double>(big_n)),
                   D(analysis::useful_frames_bound(g_ae, n, big_n)), D(omni.mean), D(omni.std_error), D(obs.mean),
                   D(obs.std_error), D(e_omni.years()), D(e_obs.years())});
    }
    finish_meta(t, cfg, p, trials);
    return t;
}

std::vector<std::string> rfid_columns(std::vector<std::string> lead)
{
    for (const char* c : {"closed_blind", "closed_bounded", "closed_knows_ids", "mc_blind", "mc_blind_ci95",
                          "mc_bounded", "mc_bounded_ci95", "mc_knows_ids", "mc_knows_ids_ci95"}) {
        lead.emplace_back(c);
    }
    return lead;
}

/// Closed forms at n plus Monte-Carlo over the full ARQ stage with m frames.
std::vector<Cell> rfid_point(const adversary::RfidOutageParams& rp, unsigned n, std::uint64_t trials,
                             std::uint64_t seed, unsigned workers)
{
    std::vector<Cell> out;
    out.push_back(D(analysis::outage_blind(rp.gamma_ae, rp.gamma_be, n)));
    out.push_back(rp.ell <= n ? D(analysis::outage_bounded(rp.gamma_ae, rp.gamma_be, n, rp.ell)) : Cell{});
    out.push_back(D(analysis::outage_knows_ids(rp.gamma_ae, n)));
    const auto mc = adversary::simulate_outage_all(rp, trials, seed, workers);
    for (std::size_t model : {0, 2, 1}) {
        out.push_back(D(mc[model].value));
        out.push_back(D(*mc[model].ci95));
    }
    return out;
}

unsigned acked_count(unsigned m, double gamma_ab)
{
    return static_cast<unsigned>(std::lround(static_cast<double>(m) * (1.0 - gamma_ab)));
}

ResultTable fig4(const ExperimentConfig& cfg)
{
    Params p(cfg.overrides);
    adversary::RfidOutageParams rp;
    rp.m = p.positive("m", 30);
    rp.ell = check_ell(p.positive("ell", 10));
    rp.gamma_ab = p.prob("gamma_ab", 0.01);
    rp.gamma_ba = p.prob("gamma_ba", 0.0);
    rp.gamma_ae = p.prob("gamma_ae", 0.02);
    const auto sweep = p.get<std::vector<double>>("gamma_be_values", {0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.3});
    const std::uint64_t trials = cfg.trials.value_or(100000);
    const unsigned n = acked_count(rp.m, rp.gamma_ab);

    ResultTable t = make_table(cfg, rfid_columns({"gamma_be", "n"}));
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        rp.gamma_be = sweep[i];
        if (!(rp.gamma_be >= 0.0 && rp.gamma_be <= 1.0)) {
            throw ConfigError("gamma_be_values must lie in [0, 1]");
        }
        std::vector<Cell> row{D(rp.gamma_be), I(n)};
        auto rest = rfid_point(rp, n, trials, point_seed(cfg.seed, i), cfg.workers);
        row.insert(row.end(), rest.begin(), rest.end());
        t.add_row(std::move(row));
    }
    finish_meta(t, cfg, p, trials);
    return t;
}

ResultTable fig5(const ExperimentConfig& cfg)
{
    Params p(cfg.overrides);
    adversary::RfidOutageParams rp;
    const unsigned n = p.positive("n", 30);
    rp.m = n;
    rp.ell = check_ell(p.positive("ell", 10));
    rp.gamma_ab = p.prob("gamma_ab", 0.001);
    rp.gamma_ba = p.prob("gamma_ba", 0.0);
    const auto grid = p.get<std::vector<double>>("gamma_values", {0.01, 0.02, 0.05, 0.1});
    const std::uint64_t trials = cfg.trials.value_or(100000);

    ResultTable t = make_table(cfg, rfid_columns({"gamma_ae", "gamma_be", "n"}));
    std::uint64_t idx = 0;
    for (double ae : grid) {
        for (double be : grid) {
            if (!(ae >= 0 && ae <= 1 && be >= 0 && be <= 1)) {
                throw ConfigError("gamma_values must lie in [0, 1]");
            }
            rp.gamma_ae = ae;
            rp.gamma_be = be;
            std::vector<Cell> row{D(ae), D(be), I(n)};
            auto rest = rfid_point(rp, n, trials, point_seed(cfg.seed, idx++), cfg.workers);
            row.insert(row.end(), rest.begin(), rest.end());
            t.add_row(std::move(row));
        }
    }
    finish_meta(t, cfg, p, trials);
    return t;
}

ResultTable fig6(const ExperimentConfig& cfg, double g_ab_default, double g_e_default)
{
    Params p(cfg.overrides);
    adversary::RfidOutageParams rp;
    rp.ell = check_ell(p.positive("ell", 10));
    rp.gamma_ab = p.prob("gamma_ab", g_ab_default);
    rp.gamma_ba = p.prob("gamma_ba", 0.0);
    rp.gamma_ae = p.prob("gamma_ae", g_e_default);
    rp.gamma_be = p.prob("gamma_be", g_e_default);
    const auto ms = p.get<std::vector<unsigned>>("m_values", {10, 20, 30, 40, 50, 60, 80, 100, 120, 150, 200});
    const std::uint64_t trials = cfg.trials.value_or(10000);

    ResultTable t = make_table(cfg, rfid_columns({"m", "n"}));
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (ms[i] < 1) {
            throw ConfigError("m_values must be >= 1");
        }
        rp.m = ms[i];
        const unsigned n = acked_count(rp.m, rp.gamma_ab);
        std::vector<Cell> row{I(rp.m), I(n)};
        auto rest = rfid_point(rp, n, trials, point_seed(cfg.seed, i), cfg.workers);
        row.insert(row.end(), rest.begin(), rest.end());
        t.add_row(std::move(row));
    }
    finish_meta(t, cfg, p, trials);
    return t;
}

ResultTable fig7(const ExperimentConfig& cfg)
{
    Params p(cfg.overrides);
    const unsigned ell = check_ell(p.positive("ell", 10));
    const double rate = p.get<double>("data_rate_bps", 106000.0);
    const double g_ab = p.prob("gamma_ab", 0.0);
    const double g_ae = p.prob("gamma_ae", 0.05);
    const double g_be = p.prob("gamma_be", 0.05);
    const auto ms = p.get<std::vector<unsigned>>("m_values", {10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 120, 150, 200});
    if (!(rate > 0)) {
        throw ConfigError("data_rate_bps must be > 0");
    }
    ResultTable t = make_table(cfg, {"m", "ell", "reads_per_second", "n", "outage"});
    for (unsigned m : ms) {
        if (m < 1) {
            throw ConfigError("m_values must be >= 1");
        }
        const auto tp = analysis::tradeoff_point(m, ell, rate, g_ab, g_ae, g_be);
        t.add_row({I(m), I(ell), D(tp.reads_per_second), I(tp.n), D(tp.outage)});
    }
    finish_meta(t, cfg, p, std::nullopt);
    return t;
}

ChannelSpec channel_or_default(const ExperimentConfig& cfg, ChannelSpec fallback)
{
    if (cfg.channel) {
        return channel_config_from_json(*cfg.channel).spec;
    }
    return fallback;
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

ResultTable wifi_session(const ExperimentConfig& cfg)
{
    Params p(cfg.overrides);
    wifi::SessionConfig sc;
    sc.n = p.positive("n", 2);
    sc.data_frames = p.get<std::uint64_t>("N", 20);
    sc.suite = wifi::parse_suite(p.get<std::string>("suite", "wep"));
    sc.init_budget = p.get<std::uint64_t>("init_budget", 1000);
    const double g_ab = p.prob("gamma_ab", 0.1);
    const double g_ba = p.prob("gamma_ba", 0.1);
    if (sc.n % 2 != 0) {
        throw ConfigError("n must be even");
    }
    ChannelSpec fallback;
    fallback.set(LinkId(kAlice, kBob), g_ab).set(LinkId(kBob, kAlice), g_ba);
    const ChannelSpec spec = channel_or_default(cfg, fallback);
    const SeededRng rng(cfg.seed);
    const SampledChannel channel(spec, rng);
    const auto log = wifi::run_unicast_session(sc, channel, rng);

    std::ostringstream os;
    wifi::write_session_csv(os, log);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    ResultTable t = make_table(cfg, split_csv_line(line));
    while (std::getline(is, line)) {
        std::vector<Cell> row;
        for (auto& c : split_csv_line(line)) {
            row.push_back(S(c));
        }
        t.add_row(std::move(row));
    }
    finish_meta(t, cfg, p, std::nullopt);
    t.meta["v0"] = log.init.v0_alice.hex();
    t.meta["init_frames"] = log.init.trials_used;
    return t;
}

ResultTable rfid_run(const ExperimentConfig& cfg)
{
    Params p(cfg.overrides);
    const unsigned m = p.positive("m", 30);
    const unsigned ell = check_ell(p.positive("ell", 10));
    const double g_ab = p.prob("gamma_ab", 0.0);
    const double g_ba = p.prob("gamma_ba", 0.0);
    ChannelSpec fallback;
    fallback.set(LinkId(kReader, kTag), g_ab).set(LinkId(kTag, kReader), g_ba);
    const ChannelSpec spec = channel_or_default(cfg, fallback);
    const SampledChannel channel(spec, SeededRng(cfg.seed));
    const auto run = rfid::run_protocol(m, ell, channel, cfg.seed);

    ResultTable t = make_table(cfg, {"m", "ell", "outcome", "abort_stage", "acked", "rng_reader", "rng_tag",
                                     "prf_reader", "prf_tag", "steps", "tag_memory_bits"});
    const auto& c = run.counters;
    t.add_row({I(m), I(ell), S(rfid::run_outcome_name(run.outcome)), S(rfid::abort_stage_name(run.stage)),
               I(static_cast<std::int64_t>(run.arq.acked.size())), I(c.rng_reader), I(c.rng_tag), I(c.prf_reader),
               I(c.prf_tag), I(c.steps), I(c.tag_memory_bits)});
    std::ostringstream os;
    rfid::write_transcript_csv(os, run.transcript);
    t.attachments.emplace_back("transcript.csv", os.str());
    finish_meta(t, cfg, p, std::nullopt);
    return t;
}

ResultTable sweep(const ExperimentConfig& cfg)
{
    Params p(cfg.overrides);
    const auto model = adversary::parse_rfid_model(p.get<std::string>("model", "blind"));
    const auto ns = p.get<std::vector<unsigned>>("n_values", {2, 4, 6, 8, 10});
    const auto aes = p.get<std::vector<double>>("gamma_ae_values", {0.05, 0.1, 0.3});
    const auto bes = p.get<std::vector<double>>("gamma_be_values", {0.05, 0.1, 0.3});
    const unsigned ell = check_ell(p.positive("ell", 3));
    const std::uint64_t trials = cfg.trials.value_or(100000);

    ResultTable t = make_table(cfg, {"model", "n", "gamma_ae", "gamma_be", "ell", "closed_form", "mc_estimate",
                                     "mc_ci95", "exact"});
    std::uint64_t idx = 0;
    for (unsigned n : ns) {
        for (double ae : aes) {
            for (double be : bes) {
                if (n < 1 || !(ae >= 0 && ae <= 1 && be >= 0 && be <= 1)) {
                    throw ConfigError("sweep grid values out of range");
                }
                if (model == adversary::RfidEveModel::BoundedKnowsIds && ell > n) {
                    continue;
                }
                adversary::RfidOutageParams rp;
                rp.m = n;
                rp.ell = ell;
                rp.gamma_ae = ae;
                rp.gamma_be = be;
                double closed = 0;
                analysis::EnumPredicate pred{};
                switch (model) {
                case adversary::RfidEveModel::Blind:
                    closed = analysis::outage_blind(ae, be, n);
                    pred = analysis::EnumPredicate::FramesAndAcks;
                    break;
                case adversary::RfidEveModel::UnboundedKnowsIds:
                    closed = analysis::outage_knows_ids(ae, n);
                    pred = analysis::EnumPredicate::AllFrames;
                    break;
                case adversary::RfidEveModel::BoundedKnowsIds:
                    closed = analysis::outage_bounded(ae, be, n, ell);
                    pred = analysis::EnumPredicate::Bounded;
                    break;
                }
                Cell exact;
                const std::size_t events = pred == analysis::EnumPredicate::AllFrames ? n : 2 * n;
                if (events <= analysis::kMaxEnumerationEvents) {
                    exact = D(analysis::exact_outage_enumeration(std::vector<double>(n, ae),
                                                                 std::vector<double>(n, be), pred, ell));
                }
                const auto mc = adversary::simulate_outage(rp, model, trials, point_seed(cfg.seed, idx++), cfg.workers);
                t.add_row({S(adversary::rfid_model_name(model)), I(n), D(ae), D(be), I(ell), D(closed), D(mc.value),
                           D(*mc.ci95), exact});
            }
        }
    }
    finish_meta(t, cfg, p, trials);
    return t;
}

}  // namespace

const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names{"fig2",         "fig4",     "fig5",  "fig6a", "fig6b",
                                                "fig7",         "wifi-session", "rfid-run", "sweep"};
    return names;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j, ExperimentConfig base)
{
    if (!j.is_object()) {
        throw ConfigError("experiment config must be a JSON object");
    }
    try {
        if (j.contains("experiment")) base.name = j.at("experiment").get<std::string>();
        if (j.contains("params")) base.overrides = j.at("params");
        if (j.contains("channel")) base.channel = j.at("channel");
        if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("trials")) base.trials = j.at("trials").get<std::uint64_t>();
        if (j.contains("workers")) base.workers = j.at("workers").get<unsigned>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad experiment config: ") + e.what());
    }
    for (const auto& [key, _] : j.items()) {
        static const std::set<std::string> known{"experiment", "params", "channel", "seed", "trials", "workers"};
        if (!known.count(key)) {
            throw ConfigError("unknown config key \"" + key + "\"");
        }
    }
    return base;
}

ResultTable run_experiment(const ExperimentConfig& cfg)
{
    if (cfg.trials && *cfg.trials == 0) {
        throw ConfigError("trials must be >= 1");
    }
    if (cfg.name == "fig2") return fig2(cfg);
    if (cfg.name == "fig4") return fig4(cfg);
    if (cfg.name == "fig5") return fig5(cfg);
    if (cfg.name == "fig6a") return fig6(cfg, 0.0, 0.05);
    if (cfg.name == "fig6b") return fig6(cfg, 0.05, 0.02);
    if (cfg.name == "fig7") return fig7(cfg);
    if (cfg.name == "wifi-session") return wifi_session(cfg);
    if (cfg.name == "rfid-run") return rfid_run(cfg);
    if (cfg.name == "sweep") return sweep(cfg);
    throw ConfigError("unknown experiment \"" + cfg.name + "\"");
}

}  // namespace arqsec::harness
