#include <optional>
#include <string>

#include "CLI11.hpp"
#include "amlgen/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Synthetic transaction-network generator for AML benchmarking"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", transactions_path;
    std::uint64_t seed_value = 0;
    bool seed_set = false;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed_value, "Master seed override")
            ->each([&](const std::string&) { seed_set = true; });
    };
    auto seed_opt = [&]() -> std::optional<std::uint64_t> {
        if (seed_set) return seed_value;
        return std::nullopt;
    };

    auto* gen = app.add_subcommand("generate", "Run the full generation pipeline");
    gen->add_option("--config", config_path, "Config JSON path")->required();
    gen->add_option("--out", out_dir, "Output directory");
    add_seed(gen);

    amlgen::FeaturesOptions fopt;
    double labeled_fraction = -1, class_noise = -1, typology_noise = -1, neighbor_noise = -1;
    std::string fi_arg = "";
    auto* feat = app.add_subcommand("features", "Build train/test feature tables from a log");
    feat->add_option("--transactions", transactions_path, "transactions.csv path")->required();
    feat->add_option("--config", config_path, "Config JSON path")->required();
    feat->add_option("--out", out_dir, "Output directory");
    feat->add_option("--labeled-fraction", labeled_fraction, "Fraction of labeled train nodes");
    feat->add_option("--class-noise", class_noise, "Per-class label flip probability");
    feat->add_option("--typology-noise", typology_noise, "Alert-pattern relabel probability");
    feat->add_option("--neighbor-noise", neighbor_noise, "Neighbor flag probability");
    feat->add_flag("--blind", fopt.blind, "Drop the true-label column");
    feat->add_option("--fi", fi_arg, "FI id for per-FI tables, or 'all'");
    add_seed(feat);

    amlgen::CalibrateOptions copt;
    auto* cal = app.add_subcommand("calibrate", "Search laundering parameters");
    cal->add_option("--config", config_path, "Config JSON path")->required();
    cal->add_option("--out", out_dir, "Output directory");
    cal->add_option("--mode", copt.mode, "knowledge-free or data-informed");
    cal->add_option("--budget", copt.budget, "Number of sampled configurations");
    cal->add_option("--fpr-target", copt.fpr_target, "Target false-positive rate");
    cal->add_option("--reference-stats", copt.reference_stats_path,
                    "Reference stats JSON (data-informed)");
    add_seed(cal);

    int dot_nodes = 50;
    auto* stats = app.add_subcommand("stats", "Dataset statistics, plot data and DOT export");
    stats->add_option("--transactions", transactions_path, "transactions.csv path")->required();
    stats->add_option("--out", out_dir, "Output directory");
    stats->add_option("--dot-nodes", dot_nodes, "Node count of the DOT subgraph");

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) return amlgen::cmd_generate(config_path, out_dir, seed_opt());
    if (feat->parsed()) {
        fopt.transactions_path = transactions_path;
        fopt.config_path = config_path;
        fopt.out_dir = out_dir;
        fopt.seed = seed_opt();
        if (labeled_fraction >= 0) fopt.labeled_fraction = labeled_fraction;
        if (class_noise >= 0) fopt.class_noise = class_noise;
        if (typology_noise >= 0) fopt.typology_noise = typology_noise;
        if (neighbor_noise >= 0) fopt.neighbor_noise = neighbor_noise;
        if (fi_arg == "all") fopt.all_fi = true;
        else if (!fi_arg.empty()) fopt.fi = std::stoi(fi_arg);
        return amlgen::cmd_features(fopt);
    }
    if (cal->parsed()) {
        copt.config_path = config_path;
        copt.out_dir = out_dir;
        copt.seed = seed_opt();
        return amlgen::cmd_calibrate(copt);
    }
    if (stats->parsed()) return amlgen::cmd_stats(transactions_path, out_dir, dot_nodes);
    return amlgen::kExitConfig;
}
