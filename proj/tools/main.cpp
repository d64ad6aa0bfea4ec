#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arcparse/bench.hpp"
#include "arcparse/conllu.hpp"
#include "arcparse/decoders.hpp"
#include "arcparse/evaluation.hpp"
#include "arcparse/loss.hpp"
#include "arcparse/runner.hpp"
#include "arcparse/vocab.hpp"

namespace {

namespace fs = std::filesystem;
using namespace arcparse;

struct TrainArgs {
    std::string train_path;
    std::string dev_path;
    std::string out_dir;
    int min_frequency = 2;
    bool no_lowercase = false;
    bool no_num_norm = false;
    ModelConfig config;
};

int run_train(const TrainArgs& args) {
    NormalizeOptions normalization;
    normalization.lowercase = !args.no_lowercase;
    normalization.number_sentinel = !args.no_num_norm;

    const std::vector<Sentence> train_data = read_conllu_file(args.train_path);
    std::vector<Sentence> dev_data;
    if (!args.dev_path.empty()) dev_data = read_conllu_file(args.dev_path);

    const Vocabulary vocab =
        Vocabulary::fit(train_data, args.min_frequency, nullptr, normalization);

    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    vocab.save_file((out / "vocab.txt").string());

    MetricsLogger metrics((out / "metrics.jsonl").string());
    CheckpointWriter checkpoints(args.out_dir);
    TrainResult result =
        train(args.config, vocab, train_data, dev_data, {&metrics, &checkpoints});
    result.model.save_file((out / "model.bin").string());

    std::cout << "trained " << result.history.epochs.size() << " epoch(s)";
    if (result.history.best_epoch > 0) {
        std::cout << ", best dev UAS " << std::fixed << std::setprecision(4)
                  << result.history.best_dev_uas << " at epoch " << result.history.best_epoch;
    }
    std::cout << "\nmodel written to " << (out / "model.bin").string() << std::endl;
    return 0;
}

int run_parse(const std::string& model_path, const std::string& vocab_path,
              const std::string& input_path, const std::string& output_path,
              const std::string& decoder) {
    const SparseParserModel model = SparseParserModel::load_file(model_path);
    const Vocabulary vocab = Vocabulary::load_file(vocab_path);
    verify_compatible(model, vocab);

    const std::vector<Sentence> sentences = read_conllu_file(input_path);
    const std::vector<DependencyTree> trees = run(model, sentences, decoder);
    if (output_path.empty() || output_path == "-") {
        write_conllu(std::cout, sentences, &trees);
    } else {
        write_conllu_file(output_path, sentences, &trees);
    }
    return 0;
}

int run_evaluate(const std::string& gold_path, const std::string& pred_path,
                 const EvalConfig& config) {
    const std::vector<Sentence> gold = read_conllu_file(gold_path);
    const std::vector<Sentence> pred = read_conllu_file(pred_path);
    std::vector<DependencyTree> trees;
    trees.reserve(pred.size());
    for (const Sentence& sentence : pred) {
        DependencyTree tree;
        for (const Token& token : sentence.tokens) {
            tree.heads.push_back(token.head);
            tree.labels.push_back(token.deprel);
        }
        trees.push_back(std::move(tree));
    }
    const EvalResult result = evaluate(gold, trees, config);
    std::cout << std::fixed << std::setprecision(4);
    std::cout << "UAS " << result.uas << '\n';
    std::cout << "LAS " << result.las << '\n';
    std::cout << "correct_arcs " << result.correct_arcs << '\n';
    std::cout << "correct_labeled_arcs " << result.correct_labeled_arcs << '\n';
    std::cout << "total_arcs " << result.total_arcs << std::endl;
    return 0;
}

int run_bench(const std::string& decoder, const std::string& corpus,
              std::vector<int> lengths, int trials, uint64_t seed, const std::string& csv_path,
              bool check) {
    if (!corpus.empty()) lengths = lengths_from_corpus(corpus);
    if (lengths.empty()) {
        std::cerr << "bench: no sentence lengths given (use --corpus or --lengths)" << std::endl;
        return 2;
    }
    const BenchReport report = benchmark(decoder, lengths, trials, seed, check);
    std::cout << "decoder " << report.decoder << '\n';
    std::cout << "sentences " << report.sentence_count << '\n';
    std::cout << std::scientific << std::setprecision(4);
    std::cout << "total_seconds " << report.total_seconds << '\n';
    std::cout << std::fixed << std::setprecision(1);
    std::cout << "sentences_per_second " << report.sentences_per_second << '\n';
    std::cout << std::scientific << std::setprecision(4);
    for (const LengthStats& stats : report.per_length) {
        std::cout << "n=" << stats.n << " trials=" << stats.trials
                  << " mean=" << stats.mean_seconds << "s stddev=" << stats.stddev_seconds
                  << "s\n";
    }
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + csv_path + " for writing");
        write_benchmark_csv(out, report);
        std::cout << "csv written to " << csv_path << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arcparse: graph-based dependency parsing toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "arcparse 0.1.0");

    const std::vector<std::string> decoders = decoder_names();
    const std::vector<std::string> losses = loss_names();
    const std::vector<std::string> learners = {"perceptron", "mira"};
    const std::vector<std::string> strategies = {"bucket", "padded", "budget"};

    TrainArgs train_args;
    CLI::App* train_cmd = app.add_subcommand("train", "Train the sparse-feature parser");
    train_cmd->set_config("--config", "", "Key=value config file; flags override it");
    train_cmd->add_option("--train", train_args.train_path, "Training CoNLL-U file")->required();
    train_cmd->add_option("--dev", train_args.dev_path, "Development CoNLL-U file");
    train_cmd->add_option("--out", train_args.out_dir, "Output directory")->required();
    train_cmd->add_option("--decoder", train_args.config.decoder, "Decoder")
        ->check(CLI::IsMember(decoders));
    train_cmd->add_option("--loss", train_args.config.loss, "Loss registry name")
        ->check(CLI::IsMember(losses));
    train_cmd->add_option("--learner", train_args.config.learner, "Online learner")
        ->check(CLI::IsMember(learners));
    train_cmd->add_option("--strategy", train_args.config.strategy, "Batching strategy")
        ->check(CLI::IsMember(strategies));
    train_cmd->add_option("--epochs", train_args.config.epochs, "Training epochs");
    train_cmd->add_option("--batch-size", train_args.config.batch_size, "Batch size");
    train_cmd->add_option("--token-budget", train_args.config.token_budget,
                          "Token budget (budget strategy)");
    train_cmd->add_option("--seed", train_args.config.seed, "Random seed");
    train_cmd->add_option("--patience", train_args.config.patience,
                          "Early-stopping patience (0 = off)");
    train_cmd->add_option("--min-freq", train_args.min_frequency, "Vocabulary frequency cutoff");
    train_cmd->add_flag("--no-lowercase", train_args.no_lowercase, "Disable lowercasing");
    train_cmd->add_flag("--no-num-norm", train_args.no_num_norm, "Disable the number sentinel");
    train_cmd->add_option("--hash-dim", train_args.config.hash_dimension,
                          "Arc feature hash dimension (power of two)");
    train_cmd->add_option("--label-dim", train_args.config.label_dimension,
                          "Label feature dimension (power of two)");
    train_cmd->add_option("--mira-c", train_args.config.mira_c, "MIRA aggressiveness cap");
    train_cmd->add_flag("--ignore-punct", train_args.config.eval.ignore_punctuation,
                        "Exclude punctuation arcs from dev scores");
    train_cmd->add_flag("--label-prefix", train_args.config.eval.label_prefix_match,
                        "Match dev labels on the pre-colon prefix");

    std::string model_path, vocab_path, input_path, output_path;
    std::string parse_decoder = "cle";
    CLI::App* parse_cmd = app.add_subcommand("parse", "Parse a CoNLL-U file with a trained model");
    parse_cmd->add_option("--model", model_path, "Model file")->required();
    parse_cmd->add_option("--vocab", vocab_path, "Vocabulary file")->required();
    parse_cmd->add_option("--input", input_path, "Input CoNLL-U file")->required();
    parse_cmd->add_option("--output", output_path, "Output CoNLL-U file (default stdout)");
    parse_cmd->add_option("--decoder", parse_decoder, "Decoder")->check(CLI::IsMember(decoders));

    std::string gold_path, pred_path;
    EvalConfig eval_config;
    CLI::App* eval_cmd = app.add_subcommand("evaluate", "Score predictions against gold");
    eval_cmd->add_option("--gold", gold_path, "Gold CoNLL-U file")->required();
    eval_cmd->add_option("--pred", pred_path, "Predicted CoNLL-U file")->required();
    eval_cmd->add_flag("--ignore-punct", eval_config.ignore_punctuation,
                       "Exclude punctuation arcs");
    eval_cmd->add_flag("--label-prefix", eval_config.label_prefix_match,
                       "Match labels on the pre-colon prefix");

    std::string bench_decoder, bench_corpus, bench_csv;
    std::vector<int> bench_lengths;
    int bench_trials = 10;
    uint64_t bench_seed = 1;
    bool bench_check = false;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Time a decoder on random score matrices");
    bench_cmd->add_option("--decoder", bench_decoder, "Decoder")
        ->required()
        ->check(CLI::IsMember(decoders));
    bench_cmd->add_option("--corpus", bench_corpus, "Draw sentence lengths from this CoNLL-U file");
    bench_cmd->add_option("--lengths", bench_lengths, "Comma-separated sentence lengths")
        ->delimiter(',');
    bench_cmd->add_option("--trials", bench_trials, "Trials per distinct length");
    bench_cmd->add_option("--seed", bench_seed, "Random seed");
    bench_cmd->add_option("--csv", bench_csv, "Write per-trial timings to this CSV file");
    bench_cmd->add_flag("--check", bench_check, "Validate decoded trees (outside timing)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train_cmd->parsed()) return run_train(train_args);
        if (parse_cmd->parsed()) {
            return run_parse(model_path, vocab_path, input_path, output_path, parse_decoder);
        }
        if (eval_cmd->parsed()) return run_evaluate(gold_path, pred_path, eval_config);
        if (bench_cmd->parsed()) {
            return run_bench(bench_decoder, bench_corpus, bench_lengths, bench_trials, bench_seed,
                             bench_csv, bench_check);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return 1;
}
