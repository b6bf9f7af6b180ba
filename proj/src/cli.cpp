#include "cssr/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cssr/codec.hpp"
#include "cssr/container.hpp"
#include "cssr/errors.hpp"
#include "cssr/frame_io.hpp"
#include "cssr/layers.hpp"
#include "cssr/solvers.hpp"

namespace cssr {

namespace {

std::string g6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

VideoSequence load_input(const std::string& path, int width, int height,
                         const std::string& format) {
    if (width > 0 || height > 0) {
        if (width <= 0 || height <= 0)
            throw ConfigError("raw input needs both --width and --height");
        const ChromaFormat chroma = format == "400" ? ChromaFormat::C400 : ChromaFormat::C420;
        return load_raw_yuv_file(path, width, height, chroma);
    }
    return load_y4m_file(path);
}

struct EncodeArgs {
    std::string input, output;
    int scale = 2, block = 32, ct = 15;
    double rate = 0.3;
    std::uint64_t seed = 1;
    std::string solver = "omp";
    int width = 0, height = 0;
    std::string format = "420";
    int threads = 0;
};

struct DecodeArgs {
    std::string input, output;
    std::string solver = "omp";
    double sigma = 0.0;
    int max_iters = 0;
    double eta = 1e-6;
    int k_cap = 0;
    bool strict = false;
    int threads = 0;
};

struct EvalArgs {
    std::string original, decoded, csv;
    int scale = 2;
};

struct SweepArgs {
    std::string input, csv;
    std::vector<int> ct_list{15};
    std::vector<double> rate_list{0.3};
    std::vector<std::string> solvers{"omp"};
    int scale = 2, block = 32;
    std::uint64_t seed = 1;
    int threads = 0;
};

int do_encode(const EncodeArgs& a, std::ostream& err) {
    // validate cheap arguments before touching the input
    CodecConfig config;
    config.scale = ScaleFactor{a.scale};
    config.block_size = a.block;
    config.rate = a.rate;
    config.threshold = a.ct;
    config.seed = a.seed;
    config.solver.kind = solver_from_name(a.solver);
    config.threads = a.threads;

    const VideoSequence video = load_input(a.input, a.width, a.height, a.format);

    const CompressedStream stream = encode(video, config);
    serialize_file(stream, a.output);
    const PayloadAccounting acc = payload_accounting(stream);
    err << "encoded " << video.frames.size() << " frame(s): base " << acc.base_bytes
        << " B, super " << acc.super_bytes << " B, sampling ratio "
        << g6(acc.ratio_vs_full_residual) << ", skipped " << acc.skipped_blocks << " block(s)\n";
    return 0;
}

int do_decode(const DecodeArgs& a, std::ostream& err) {
    DecodeOptions options;
    options.solver.kind = solver_from_name(a.solver);
    options.solver.sigma = a.sigma;
    options.solver.max_iterations = a.max_iters;
    options.solver.eta = a.eta;
    options.k_cap = a.k_cap;
    options.strict = a.strict;
    options.threads = a.threads;

    const CompressedStream stream = deserialize_file(a.input);

    const DecodeResult result = decode(stream, options);
    long long failed = 0;
    for (const DecodeFrameStats& s : result.stats) failed += s.failed_blocks;
    if (failed > 0)
        err << "warning: " << failed << " block(s) did not converge and decoded as zeros\n";
    write_y4m_file(result.video, a.output);
    return 0;
}

int do_eval(const EvalArgs& a) {
    const VideoSequence original = load_y4m_file(a.original);
    const VideoSequence decoded = load_y4m_file(a.decoded);

    VideoSequence base_upsampled;
    base_upsampled.frame_rate = original.frame_rate;
    base_upsampled.frames.reserve(original.frames.size());
    for (const VideoFrame& frame : original.frames)
        base_upsampled.frames.push_back(upsample(downsample(frame, ScaleFactor{a.scale}),
                                                 ScaleFactor{a.scale}));

    const std::vector<FrameMetrics> metrics = evaluate(original, decoded, base_upsampled);
    std::ofstream csv(a.csv, std::ios::binary);
    if (!csv) throw IoError("cannot open '" + a.csv + "' for writing");
    // Shared CSV schema; columns eval cannot know stay empty.
    csv << "frame,solver,ct,rate,psnr_db,baseline_psnr_db,mean_k,super_bytes,status\n";
    for (const FrameMetrics& fm : metrics)
        csv << fm.frame_index << ",,,," << g6(fm.psnr_db) << ',' << g6(fm.psnr_baseline_db)
            << ",,,ok\n";
    if (!csv) throw IoError("write failure on '" + a.csv + "'");
    return 0;
}

int do_sweep(const SweepArgs& a) {
    CodecConfig config;
    config.scale = ScaleFactor{a.scale};
    config.block_size = a.block;
    config.seed = a.seed;
    config.threads = a.threads;

    std::vector<SolverKind> solvers;
    solvers.reserve(a.solvers.size());
    for (const std::string& name : a.solvers) solvers.push_back(solver_from_name(name));

    const VideoSequence video = load_y4m_file(a.input);

    const std::vector<SweepRecord> records = sweep(video, config, solvers, a.ct_list, a.rate_list);
    std::ofstream csv(a.csv, std::ios::binary);
    if (!csv) throw IoError("cannot open '" + a.csv + "' for writing");
    write_sweep_csv(records, csv);
    if (!csv) throw IoError("write failure on '" + a.csv + "'");
    return 0;
}

int do_info(const std::string& input, std::ostream& out) {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw IoError("cannot open '" + input + "' for reading");
    const StreamHeader h = read_header(in);
    out << "version: " << h.version << '\n'
        << "width: " << h.width << '\n'
        << "height: " << h.height << '\n'
        << "frame_count: " << h.frame_count << '\n'
        << "scale: " << static_cast<int>(h.scale) << '\n'
        << "block_size: " << h.block_size << '\n'
        << "rows: " << h.rows << '\n'
        << "cols: " << h.cols << '\n'
        << "threshold: " << h.threshold << '\n'
        << "seed: " << h.seed << '\n'
        << "solver_hint: " << solver_name(static_cast<SolverKind>(h.solver_hint)) << '\n';
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cssr: two-layer scalable codec with compressively sampled residual super-frames"};
    app.require_subcommand(1);

    EncodeArgs enc;
    CLI::App* encode_cmd = app.add_subcommand("encode", "compress a clip into a .cssr stream");
    encode_cmd->add_option("--input", enc.input, "input clip (.y4m, or raw with --width/--height)")
        ->required();
    encode_cmd->add_option("--output", enc.output, "output .cssr path")->required();
    encode_cmd->add_option("--scale", enc.scale, "down-sampling factor m")->capture_default_str();
    encode_cmd->add_option("--block", enc.block, "residual tile size B")->capture_default_str();
    encode_cmd->add_option("--rate", enc.rate, "sampling rate M/N in (0,1)")->capture_default_str();
    encode_cmd->add_option("--ct", enc.ct, "zero-forcing threshold CT")->capture_default_str();
    encode_cmd->add_option("--seed", enc.seed, "sensing matrix seed")->capture_default_str();
    encode_cmd->add_option("--solver", enc.solver, "solver hint stored in the header")
        ->capture_default_str();
    CLI::Option* w = encode_cmd->add_option("--width", enc.width, "raw input width");
    CLI::Option* h = encode_cmd->add_option("--height", enc.height, "raw input height");
    w->needs(h);
    h->needs(w);
    encode_cmd->add_option("--format", enc.format, "raw chroma format")
        ->check(CLI::IsMember({"420", "400"}))
        ->capture_default_str();
    encode_cmd->add_option("--threads", enc.threads, "worker threads (0 = auto)")
        ->capture_default_str();

    DecodeArgs dec;
    CLI::App* decode_cmd = app.add_subcommand("decode", "reconstruct a clip from a .cssr stream");
    decode_cmd->add_option("--input", dec.input, "input .cssr path")->required();
    decode_cmd->add_option("--output", dec.output, "output .y4m path")->required();
    decode_cmd->add_option("--solver", dec.solver, "recovery solver: omp, cosamp or bp")
        ->capture_default_str();
    decode_cmd->add_option("--sigma", dec.sigma, "basis pursuit noise radius")
        ->capture_default_str();
    decode_cmd->add_option("--max-iters", dec.max_iters, "solver iteration budget (0 = default)")
        ->capture_default_str();
    decode_cmd->add_option("--eta", dec.eta, "cosamp halting precision relative to ||y||")
        ->capture_default_str();
    decode_cmd->add_option("--k-cap", dec.k_cap, "cap on per-block sparsity (0 = off)")
        ->capture_default_str();
    decode_cmd->add_flag("--strict", dec.strict, "abort on solver non-convergence (exit 3)");
    decode_cmd->add_option("--threads", dec.threads, "worker threads (0 = auto)")
        ->capture_default_str();

    EvalArgs ev;
    CLI::App* eval_cmd = app.add_subcommand("eval", "frame-by-frame PSNR report");
    eval_cmd->add_option("--original", ev.original, "reference .y4m")->required();
    eval_cmd->add_option("--decoded", ev.decoded, "reconstructed .y4m")->required();
    eval_cmd->add_option("--csv", ev.csv, "output CSV path")->required();
    eval_cmd->add_option("--scale", ev.scale, "factor m for the up-sample-only baseline")
        ->capture_default_str();

    SweepArgs sw;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid evaluation over CT, rate and solver");
    sweep_cmd->add_option("--input", sw.input, "input .y4m clip")->required();
    sweep_cmd->add_option("--csv", sw.csv, "output CSV path")->required();
    sweep_cmd->add_option("--ct-list", sw.ct_list, "comma-separated CT values")
        ->delimiter(',')
        ->capture_default_str();
    sweep_cmd->add_option("--rate-list", sw.rate_list, "comma-separated sampling rates")
        ->delimiter(',')
        ->capture_default_str();
    sweep_cmd->add_option("--solvers", sw.solvers, "comma-separated solver names")
        ->delimiter(',')
        ->capture_default_str();
    sweep_cmd->add_option("--scale", sw.scale, "down-sampling factor m")->capture_default_str();
    sweep_cmd->add_option("--block", sw.block, "residual tile size B")->capture_default_str();
    sweep_cmd->add_option("--seed", sw.seed, "sensing matrix seed")->capture_default_str();
    sweep_cmd->add_option("--threads", sw.threads, "worker threads (0 = auto)")
        ->capture_default_str();

    std::string info_input;
    CLI::App* info_cmd = app.add_subcommand("info", "print the header of a .cssr stream");
    info_cmd->add_option("--input", info_input, "input .cssr path")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("cssr");
    for (const std::string& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (encode_cmd->parsed()) return do_encode(enc, err);
        if (decode_cmd->parsed()) return do_decode(dec, err);
        if (eval_cmd->parsed()) return do_eval(ev);
        if (sweep_cmd->parsed()) return do_sweep(sw);
        if (info_cmd->parsed()) return do_info(info_input, out);
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {  // parse/format/truncation/header/dimension/index/io
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

}  // namespace cssr
