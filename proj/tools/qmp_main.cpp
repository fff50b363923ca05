#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qmp/harness.hpp"
#include "qmp/mpc.hpp"

using namespace qmp;

namespace {

int cmd_check_structure(const std::string& literal) {
    structures::MonotoneFamily a;
    try {
        a = structures::parse_structure(literal);
    } catch (const std::invalid_argument& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    }
    std::cout << "structure " << structures::format_structure(a) << "\n";
    std::cout << "players " << a.n() << "\n";
    std::cout << "partial " << (structures::partially_robust_admissible(a) ? "yes" : "no") << "\n";
    std::cout << "robust " << (structures::robust_admissible(a) ? "yes" : "no") << "\n";

    auto dual = structures::dual_access(a);
    std::cout << "minimal-qualified";
    for (auto z : dual.extremal()) std::cout << " " << z.str();
    std::cout << "\nmax-unqualified";
    for (auto t : structures::max_unqualified(dual)) std::cout << " " << t.str();
    std::cout << "\n";
    for (auto m : a.extremal()) {
        auto post = structures::post_termination_secure(a, m);
        std::cout << "post-secure M=" << m.str() << " ->";
        for (auto e : post.extremal()) std::cout << " " << e.str();
        std::cout << "\n";
        auto rob = structures::post_termination_robust(post);
        std::cout << "post-robust M=" << m.str() << " ->";
        for (auto e : rob.extremal()) std::cout << " " << e.str();
        std::cout << "\n";
    }
    return 0;
}

int cmd_run(const std::string& path, std::optional<uint64_t> seed, std::optional<long> trials,
            const std::string& format, int threads) {
    std::ifstream f(path);
    if (!f) {
        std::cerr << "cannot read scenario file: " << path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << f.rdbuf();
    harness::Scenario s;
    try {
        s = harness::load_scenario(buf.str());
    } catch (const harness::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const commit::InadmissibleStructure& e) {
        std::cerr << "inadmissible structure: " << e.what() << "\n";
        return 2;
    }
    if (seed) s.seed = *seed;
    if (trials) {
        if (*trials < 1) {
            std::cerr << "usage error: trials must be at least 1\n";
            return 2;
        }
        s.trials = *trials;
    }
    auto t = harness::run_scenario(s, threads);
    std::cout << harness::report(
        t, format == "structured" ? harness::ReportFormat::Structured : harness::ReportFormat::Text);
    return t.pass ? 0 : 1;
}

int cmd_attack_demo(const std::string& toy_name, uint64_t seed) {
    quantum::ToyProtocol toy;
    try {
        toy = quantum::toy_protocol_from_name(toy_name);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
    Rng rng(seed);
    auto rep = quantum::mayers_attack_demo(toy, rng);
    std::cout << quantum::attack_report_text(rep);
    const bool expect_flip = toy != quantum::ToyProtocol::Revealing;
    const bool flipped = rep.certified == quantum::AttackReport::Certified::Flippable;
    return expect_flip == flipped ? 0 : 1;
}

int cmd_bb84(int n, double alpha, const std::string& attack, long trials, uint64_t seed, int b0,
             int b1, int choice, bool no_forcing) {
    harness::Scenario s;
    s.protocol = harness::ProtocolKind::Bb84Ot;
    s.name = "bb84-ot-cli";
    s.bb84_params.num_positions = n;
    s.bb84_params.test_fraction = alpha;
    s.bb84_params.forcing = !no_forcing;
    s.ot_b0 = b0;
    s.ot_b1 = b1;
    s.ot_choice = choice;
    s.trials = trials;
    s.seed = seed;
    if (attack == "delayed") s.receiver_mode = bb84::ReceiverMode::DelayedMeasurement;
    else if (attack != "none") {
        std::cerr << "usage error: attack must be delayed or none\n";
        return 2;
    }
    auto t = harness::run_scenario(s);
    std::cout << t.to_text();
    return t.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulator for secret-sharing commitments, measurement-forcing oblivious "
                 "transfer and structure-dependent multiparty security"};
    app.require_subcommand(1);

    std::string literal;
    auto* check = app.add_subcommand("check-structure", "analyze a structure literal");
    check->add_option("literal", literal, "threshold(n,t) or sets(n; 0 1, 2 3)")->required();

    std::string scenario_path, format = "text";
    std::optional<uint64_t> seed_opt;
    std::optional<long> trials_opt;
    int threads = 1;
    auto* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--seed", seed_opt, "override the scenario seed");
    run->add_option("--trials", trials_opt, "override the trial count");
    run->add_option("--report", format, "text or structured")
        ->check(CLI::IsMember({"text", "structured"}));
    run->add_option("--threads", threads, "worker threads for the trials");

    std::string toy_name;
    uint64_t demo_seed = 1;
    auto* demo = app.add_subcommand("attack-demo", "run a toy-commitment attack");
    demo->add_option("protocol", toy_name, "entangling | revealing | measure-then-flip")->required();
    demo->add_option("--seed", demo_seed, "randomness seed");

    int n = 128, b0 = 0, b1 = 1, choice = 0;
    double alpha = 0.5;
    std::string attack = "none";
    long trials = 1;
    uint64_t seed = 1;
    bool no_forcing = false;
    auto* ot = app.add_subcommand("bb84-ot", "run conjugate-coding oblivious transfer");
    ot->add_option("--n", n, "positions");
    ot->add_option("--alpha", alpha, "tested fraction");
    ot->add_option("--attack", attack, "delayed or none");
    ot->add_option("--trials", trials, "trial count");
    ot->add_option("--seed", seed, "randomness seed");
    ot->add_option("--b0", b0, "first payload bit");
    ot->add_option("--b1", b1, "second payload bit");
    ot->add_option("--choice", choice, "receiver choice bit");
    ot->add_flag("--no-forcing", no_forcing, "disable the measurement-forcing commitments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (check->parsed()) return cmd_check_structure(literal);
        if (run->parsed()) return cmd_run(scenario_path, seed_opt, trials_opt, format, threads);
        if (demo->parsed()) return cmd_attack_demo(toy_name, demo_seed);
        if (ot->parsed()) return cmd_bb84(n, alpha, attack, trials, seed, b0, b1, choice, no_forcing);
    } catch (const commit::InadmissibleStructure& e) {
        std::cerr << "inadmissible structure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
