#include "arqsec/harness/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "arqsec/adversary/outage_mc.hpp"
#include "arqsec/analysis/closed_form.hpp"
#include "arqsec/analysis/enumeration.hpp"
#include "arqsec/rfid/protocol.hpp"
#include "arqsec/wifi/overlay.hpp"

namespace arqsec::harness {
namespace {

constexpr double kZ999 = 3.2905267314919255;
const std::vector<double> kGrid{0.05, 0.1, 0.3, 0.5};

double rel_err(double a, double b)
{
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

CheckResult closed_vs_enumeration()
{
    using analysis::EnumPredicate;
    double worst = 0.0;
    std::string where;
    auto note = [&](double err, const std::string& what) {
        if (err > worst) {
            worst = err;
            where = what;
        }
    };
    for (unsigned n = 1; n <= 8; ++n) {
        for (double ae : kGrid) {
            for (double be : kGrid) {
                const std::vector<double> va(n, ae), vb(n, be);
                const std::string at = " n=" + std::to_string(n) + " ae=" + fmt(ae) + " be=" + fmt(be);
                note(rel_err(analysis::outage_blind(ae, be, n),
                             analysis::exact_outage_enumeration(va, vb, EnumPredicate::FramesAndAcks)),
                     "blind" + at);
                note(rel_err(analysis::outage_knows_ids(ae, n),
                             analysis::exact_outage_enumeration(va, {}, EnumPredicate::AllFrames)),
                     "knows_ids" + at);
                if (n % 2 == 0) {
                    const std::vector<double> ha(n / 2, ae), hb(n / 2, be);
                    note(rel_err(analysis::p0_closed(ae, be, n),
                                 analysis::exact_outage_enumeration(ha, hb, EnumPredicate::AllInit)),
                         "p0" + at);
                }
            }
        }
    }
    return {"closed_vs_enumeration", worst <= 1e-12, "max relative error " + fmt(worst) + where};
}

CheckResult bounded_vs_enumeration(int offset)
{
    double worst = 0.0;
    std::string where;
    for (unsigned n = 1; n <= 8; ++n) {
        for (unsigned ell = 1; ell <= n; ++ell) {
            for (double ae : kGrid) {
                for (double be : kGrid) {
                    const double closed = analysis::outage_bounded(ae, be, n, ell, offset);
                    const double exact = analysis::exact_outage_enumeration(
                        std::vector<double>(n, ae), std::vector<double>(n, be), analysis::EnumPredicate::Bounded, ell);
                    const double err = rel_err(closed, exact);
                    if (err > worst) {
                        worst = err;
                        where = " at n=" + std::to_string(n) + " l=" + std::to_string(ell) + " ae=" + fmt(ae) +
                                " be=" + fmt(be) + " closed=" + fmt(closed) + " enumeration=" + fmt(exact);
                    }
                }
            }
        }
    }
    return {"bounded_vs_enumeration", worst <= 1e-12, "max relative error " + fmt(worst) + where};
}

CheckResult mc_vs_closed(const ValidationConfig& cfg)
{
    std::string detail;
    bool ok = true;
    std::uint64_t idx = 0;
    for (double be : {0.02, 0.1}) {
        adversary::RfidOutageParams rp;
        rp.m = 30;
        rp.ell = 10;
        rp.gamma_ae = 0.02;
        rp.gamma_be = be;
        const auto mc = adversary::simulate_outage_all(rp, cfg.trials, cfg.seed + idx++, cfg.workers);
        const double closed[3] = {analysis::outage_blind(0.02, be, 30), analysis::outage_knows_ids(0.02, 30),
                                  analysis::outage_bounded(0.02, be, 30, 10)};
        for (int i = 0; i < 3; ++i) {
            const auto w = mc[i].interval(kZ999);
            if (!w.contains(closed[i])) {
                ok = false;
                detail += std::string(mc[i].params["model"]) + " be=" + fmt(be) + " closed=" + fmt(closed[i]) +
                          " mc=" + fmt(mc[i].value) + "; ";
            }
        }
    }
    return {"mc_vs_closed", ok, ok ? "all within 99.9% Wilson intervals" : detail};
}

CheckResult eq5_direct_sum()
{
    double worst = 0.0;
    for (double g : {0.004, 0.05, 0.1}) {
        for (std::uint64_t n : {2, 10, 100}) {
            const std::uint64_t big_n = 10000;
            long double direct = 0;
            for (std::uint64_t i = n + 1; i <= big_n; ++i) {
                direct += std::pow(1.0L - g, static_cast<long double>(i));
            }
            worst = std::max(worst, rel_err(analysis::useful_frames_bound(g, n, big_n), static_cast<double>(direct)));
        }
    }
    return {"useful_frames_bound_direct_sum", worst <= 1e-9, "max relative error " + fmt(worst)};
}

ErasureTrace perfect_rfid_trace(std::uint64_t slots)
{
    ErasureTrace t(slots);
    t.add_link(LinkId(kReader, kTag)).add_link(LinkId(kTag, kReader));
    return t;
}

CheckResult overhead_counters(std::uint64_t seed)
{
    for (unsigned m : {1U, 10U, 30U}) {
        for (unsigned ell : {8U, 10U, 16U}) {
            const auto trace = perfect_rfid_trace(m + 3);
            const auto run = rfid::run_protocol(m, ell, trace, seed + m * 100 + ell);
            const rfid::OverheadCounters want{m + 1, 1, 2, 2, m + 3, 14 * ell};
            if (run.outcome != rfid::RunOutcome::MutualSuccess || !(run.counters == want)) {
                return {"overhead_counters", false,
                        "m=" + std::to_string(m) + " l=" + std::to_string(ell) + " outcome " +
                            rfid::run_outcome_name(run.outcome)};
            }
        }
    }
    return {"overhead_counters", true, "m in {1,10,30}, l in {8,10,16}"};
}

struct WifiTally {
    std::uint64_t delivered = 0;
    std::uint64_t bad = 0;
};

void tally(const wifi::SessionLog& log, WifiTally& t)
{
    for (const auto& f : log.frames) {
        if (!f.delivered) {
            continue;
        }
        ++t.delivered;
        const bool good = f.outcome == wifi::Outcome::Accepted && f.attempt >= 1 && f.attempt <= 2 && f.v_d == f.v_e;
        t.bad += good ? 0 : 1;
    }
}

CheckResult wifi_agreement(std::uint64_t seed)
{
    WifiTally t;
    const unsigned big_n = 5;
    wifi::SessionConfig sc;
    sc.n = 2;
    sc.data_frames = big_n;
    const LinkId ab(kAlice, kBob), ba(kBob, kAlice);
    for (std::uint32_t pattern = 0; pattern < (1U << (2 * big_n)); ++pattern) {
        ErasureTrace trace(2 + 2 * big_n);
        trace.add_link(ab).add_link(ba);
        for (unsigned i = 0; i < big_n; ++i) {
            trace.set(ab, 2 + 2 * i, (pattern >> (2 * i)) & 1U);
            trace.set(ba, 3 + 2 * i, (pattern >> (2 * i + 1)) & 1U);
        }
        tally(wifi::run_unicast_session(sc, trace, SeededRng(seed, pattern)), t);
    }
    ChannelSpec spec;
    spec.set_pair(kAlice, kBob, 0.2);
    sc.data_frames = 1000;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const SeededRng rng(seed + 1, trial);
        tally(wifi::run_unicast_session(sc, SampledChannel(spec, rng), rng), t);
    }
    return {"wifi_agreement", t.bad == 0,
            std::to_string(t.bad) + " bad outcomes over " + std::to_string(t.delivered) + " delivered frames"};
}

CheckResult rfid_key_agreement(std::uint64_t seed)
{
    ChannelSpec spec;
    spec.set_pair(kReader, kTag, 0.3);
    std::uint64_t runs = 0, bad = 0;
    for (std::uint64_t trial = 0; trial < 2000; ++trial) {
        const SeededRng rng(seed, trial);
        CounterRng r = rng.stream(kReader.code(), Purpose::ArqFrame);
        try {
            const auto arq = rfid::run_arq_stage(10, 32, SampledChannel(spec, rng), r);
            ++runs;
            const auto hyps = rfid::key_hypotheses(arq);
            bad += std::find(hyps.begin(), hyps.end(), arq.k_prime_tag) == hyps.end() ? 1 : 0;
        } catch (const rfid::DegenerateKey&) {
        }
    }
    return {"rfid_key_agreement", bad == 0 && runs > 0,
            std::to_string(bad) + " disagreements over " + std::to_string(runs) + " non-degenerate runs"};
}

CheckResult rfid_desync(std::uint64_t seed)
{
    const unsigned m = 4, ell = 16;
    std::uint64_t failures = 0, total = 0;
    for (unsigned k = 1; k <= m + 3; ++k) {
        for (std::uint64_t trial = 0; trial < 25; ++trial) {
            const SeededRng rng(seed + k, trial);
            CounterRng prov = rng.stream(kTag.code(), Purpose::Provisioning);
            const auto p = rfid::Provision::random(ell, prov);
            rfid::ReaderState reader(ell);
            reader.enroll(p);
            auto tag = rfid::TagState::from_provision(p);
            CounterRng rr = rng.stream(kReader.code(), Purpose::ArqFrame);
            CounterRng tr = rng.stream(kTag.code(), Purpose::TagNonce);
            const auto trace = perfect_rfid_trace(10 * (m + 3));
            rfid::RunOptions opts;
            opts.interrupt_after = k;
            rfid::run_protocol(reader, tag, m, trace, rr, tr, opts);
            std::uint64_t slot = m + 3;
            const auto rec = rfid::authenticate_with_recovery(reader, tag, m, trace, rr, tr, 2, slot);
            ++total;
            failures += rec.authenticated ? 0 : 1;
        }
    }
    return {"rfid_desync_liveness", failures == 0,
            std::to_string(failures) + " unrecovered of " + std::to_string(total)};
}

/// Three consecutive rounds, then the tag is compromised. Transcripts of the
/// first two rounds and of the latest round are probed separately.
std::vector<CheckResult> forward_secrecy(std::uint64_t seed)
{
    const unsigned m = 8, ell = 32, rounds = 3;
    std::uint64_t older_leaks = 0, latest_leaks = 0, control_failures = 0, chains = 0;
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        const SeededRng rng(seed, trial);
        CounterRng prov = rng.stream(kTag.code(), Purpose::Provisioning);
        const auto p = rfid::Provision::random(ell, prov);
        rfid::ReaderState reader(ell);
        reader.enroll(p);
        auto tag = rfid::TagState::from_provision(p);
        CounterRng rr = rng.stream(kReader.code(), Purpose::ArqFrame);
        CounterRng tr = rng.stream(kTag.code(), Purpose::TagNonce);
        const auto trace = perfect_rfid_trace(rounds * (m + 3));
        std::vector<rfid::PastTranscript> past;
        bool complete = true;
        for (unsigned r = 0; r < rounds && complete; ++r) {
            const BitWord ids_before = tag.ids;
            const rfid::KeyBundle k_before = tag.k;
            rfid::RunOptions opts;
            opts.first_slot = r * (m + 3);
            const auto run = rfid::run_protocol(reader, tag, m, trace, rr, tr, opts);
            complete = run.outcome == rfid::RunOutcome::MutualSuccess;
            if (complete) {
                past.push_back({*run.msg1, *run.msg2, *run.msg3});
                const auto ctl = rfid::probe_transcript(past.back(), ids_before, k_before, run.arq.k_prime_tag, tag.id);
                control_failures +=
                    (ctl.ids_linked && ctl.id_unmasked && ctl.m1_recomputed && ctl.m2_recomputed) ? 0 : 1;
            }
        }
        if (!complete) {
            continue;
        }
        ++chains;
        for (std::size_t i = 0; i < past.size(); ++i) {
            const bool leak = rfid::probe_transcript(past[i], tag.ids, tag.k, tag.k_prime, tag.id).any();
            (i + 1 == past.size() ? latest_leaks : older_leaks) += leak ? 1 : 0;
        }
    }
    const std::string of = " over " + std::to_string(chains) + " compromised tags";
    return {{"forward_secrecy_older_runs", older_leaks == 0 && control_failures == 0 && chains > 0,
             std::to_string(older_leaks) + " leaks, " + std::to_string(control_failures) + " control failures" + of},
            {"forward_secrecy_latest_run", latest_leaks == 0 && chains > 0,
             std::to_string(latest_leaks) + " leaks" + of +
                 " (the Msg3 ID mask k5^k'5 is the tag's updated k5)"}};
}

}  // namespace

bool ValidationReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> ValidationReport::failures() const
{
    std::vector<std::string> out;
    for (const auto& c : checks) {
        if (!c.passed) {
            out.push_back(c.name);
        }
    }
    return out;
}

nlohmann::json ValidationReport::to_json() const
{
    nlohmann::json checks_json = nlohmann::json::array();
    for (const auto& c : checks) {
        checks_json.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    return {{"passed", passed()}, {"failures", failures()}, {"checks", checks_json}};
}

ValidationReport validate(const ValidationConfig& cfg)
{
    if (cfg.trials == 0) {
        throw std::invalid_argument("trials must be >= 1");
    }
    if (!cfg.mutation.empty() && cfg.mutation != "bounded_sum_limit") {
        throw std::invalid_argument("unknown mutation: " + cfg.mutation);
    }
    ValidationReport r;
    r.checks.push_back(closed_vs_enumeration());
    r.checks.push_back(bounded_vs_enumeration(cfg.mutation == "bounded_sum_limit" ? 1 : 0));
    r.checks.push_back(mc_vs_closed(cfg));
    r.checks.push_back(eq5_direct_sum());
    r.checks.push_back(overhead_counters(cfg.seed));
    r.checks.push_back(wifi_agreement(cfg.seed));
    r.checks.push_back(rfid_key_agreement(cfg.seed));
    r.checks.push_back(rfid_desync(cfg.seed));
    for (auto& c : forward_secrecy(cfg.seed)) {
        r.checks.push_back(std::move(c));
    }
    return r;
}

}  // namespace arqsec::harness
