// gqt: synthetic data, masking, completion, decomposition and metrics for
// third-order quaternion tensors (QT3/QM3 files, PNG frame directories).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gqt/completion.hpp"
#include "gqt/errors.hpp"
#include "gqt/gqt_algebra.hpp"
#include "gqt/media_io.hpp"
#include "gqt/metrics.hpp"
#include "gqt/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gqt;

namespace {

PureUnitQuaternion parse_mu(const std::string& s) {
    if (s == "i") return PureUnitQuaternion::unit_i();
    if (s == "j") return PureUnitQuaternion::unit_j();
    if (s == "k") return PureUnitQuaternion::unit_k();
    if (s == "sym") return PureUnitQuaternion::symmetric();
    double a, b, c;
    char c1, c2;
    std::istringstream in(s);
    if (!(in >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',')
        throw ConfigError("--mu expects 'i', 'j', 'k', 'sym' or 'a,b,c'");
    return PureUnitQuaternion(a, b, c);
}

std::array<int, 3> parse_shape(const std::string& s) {
    int a, b, c;
    char c1, c2;
    std::istringstream in(s);
    if (!(in >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',' || a < 1 || b < 1 || c < 1)
        throw ConfigError("--shape expects 'n1,n2,n3' with positive dimensions");
    return {a, b, c};
}

std::array<double, 3> parse_alpha(const std::string& s) {
    double a, b, c;
    char c1, c2;
    std::istringstream in(s);
    if (!(in >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',')
        throw ConfigError("--alpha expects 'a1,a2,a3'");
    if (a < 0 || b < 0 || c < 0 || a + b + c <= 0)
        throw ConfigError("--alpha weights must be nonnegative with a positive sum");
    return {a, b, c};
}

// Rank-r tensor with pixels along mu: mu times a sum of r real rank-1 terms.
// Generic draws have gQt-rank r along every mode and equal their own
// imaginary part, so one construction serves both solvers' fixtures.
QTensor3 synth_tensor(int n1, int n2, int n3, int r, const PureUnitQuaternion& mu,
                      std::uint64_t seed) {
    SplitMix64 rng(seed);
    QTensor3 M(n1, n2, n3);
    for (int s = 0; s < r; ++s) {
        std::vector<double> u(n1), v(n2), w(n3);
        for (auto& x : u) x = rng.next_normal();
        for (auto& x : v) x = rng.next_normal();
        for (auto& x : w) x = rng.next_normal();
        for (int k = 0; k < n3; ++k)
            for (int j = 0; j < n2; ++j)
                for (int i = 0; i < n1; ++i)
                    M(i, j, k) += mu.as_quaternion() * (u[i] * v[j] * w[k]);
    }
    return M;
}

int resolve_threads(int threads_flag) {
    if (threads_flag > 0) return threads_flag;
    if (const char* env = std::getenv("GQT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("bad config file " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    return j;
}

// CLI > config file > built-in default.
template <class T>
void merge(const json& file, const CLI::Option* opt, const char* key, T& var) {
    if (opt->count() == 0 && file.contains(key)) var = file.at(key).get<T>();
}

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

json metrics_json(const QTensor3& truth, const QTensor3& est) {
    auto num = [](double v) -> json {
        if (v == std::numeric_limits<double>::infinity()) return "inf";
        if (v == -std::numeric_limits<double>::infinity()) return "-inf";
        return v;
    };
    json j;
    j["rse_db"] = num(rse(truth, est));
    j["psnr_db"] = num(psnr(truth, est));
    try {
        j["ssim"] = num(ssim(truth, est));
    } catch (const FrameTooSmall&) {
        j["ssim"] = nullptr;  // frames smaller than the 11x11 window
    }
    return j;
}

void print_metrics(const json& j) {
    auto cell = [&](const char* key) {
        return j.at(key).is_null() ? std::string("n/a") : j.at(key).dump();
    };
    std::cout << "metric   value\n"
              << "RSE(dB)  " << cell("rse_db") << "\n"
              << "PSNR(dB) " << cell("psnr_db") << "\n"
              << "SSIM     " << cell("ssim") << "\n"
              << j.dump() << "\n";
}

struct CommonOpts {
    std::string config_path;
    std::string mu = "sym";
    std::string out;
    std::uint64_t seed = 0;
    int threads = 0;

    CLI::Option* mu_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* threads_opt = nullptr;

    void attach(CLI::App* app, bool need_out) {
        app->add_option("--config", config_path, "JSON config file (flags override it)");
        mu_opt = app->add_option("--mu", mu, "transform axis: i|j|k|sym or a,b,c");
        seed_opt = app->add_option("--seed", seed, "deterministic seed");
        threads_opt = app->add_option("--threads", threads, "worker threads (env GQT_THREADS)");
        auto* o = app->add_option("--out", out, "output directory");
        if (need_out) o->required();
    }

    void merge_common(const json& file) {
        merge(file, mu_opt, "mu", mu);
        merge(file, seed_opt, "seed", seed);
        merge(file, threads_opt, "threads", threads);
    }

    void stamp(json& j) const {
        j["mu"] = mu;
        j["seed"] = seed;
        j["threads"] = resolve_threads(threads);
    }
};

fs::path make_out_dir(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

int cmd_synth(const CommonOpts& common, const std::string& shape_s, int rank) {
    const auto shape = parse_shape(shape_s);
    const PureUnitQuaternion mu = parse_mu(common.mu);
    if (rank < 1 || rank > std::min(shape[0], shape[1]))
        throw ConfigError("--rank must lie in [1, min(n1,n2)]");

    const QTensor3 M = synth_tensor(shape[0], shape[1], shape[2], rank, mu, common.seed);
    const fs::path dir = make_out_dir(common.out);
    write_qt3(M, (dir / "truth.qt3").string());

    json cfg;
    cfg["command"] = "synth";
    cfg["shape"] = shape_s;
    cfg["rank"] = rank;
    common.stamp(cfg);
    write_json(cfg, dir / "config.json");

    std::cout << "wrote " << (dir / "truth.qt3").string() << "\n"
              << "gqt_rank " << gqt_rank(M, mu) << "\n";
    return 0;
}

int cmd_mask(const CommonOpts& common, const std::string& shape_s, const std::string& tensor,
             double rho) {
    std::array<int, 3> shape{};
    if (!tensor.empty()) {
        const QTensor3 T = read_qt3(tensor);
        shape = {T.n1(), T.n2(), T.n3()};
    } else if (!shape_s.empty()) {
        shape = parse_shape(shape_s);
    } else {
        throw ConfigError("mask needs --shape or --tensor");
    }
    if (rho < 0.0 || rho > 1.0) throw ConfigError("--rho must lie in [0,1]");

    const ObservationMask m = sample_mask(shape[0], shape[1], shape[2], rho, common.seed);
    const fs::path dir = make_out_dir(common.out);
    write_mask(m, (dir / "mask.qm3").string());

    json cfg;
    cfg["command"] = "mask";
    cfg["shape"] = std::to_string(shape[0]) + "," + std::to_string(shape[1]) + "," +
                   std::to_string(shape[2]);
    cfg["rho"] = rho;
    common.stamp(cfg);
    write_json(cfg, dir / "config.json");

    std::cout << "wrote " << (dir / "mask.qm3").string() << " (" << m.count() << " of "
              << m.size() << " observed)\n";
    return 0;
}

struct CompleteOpts {
    std::string tensor, frames, mask, truth, algo = "qrtc", alpha = "10,10,1";
    std::string rank_file;
    int rank = 30, max_outer = 20, max_inner = 100;
    double lambda = 21.0, lambda1 = 5.0, lambda2 = 5.0, beta = 0.1, epsilon = 1e-3;
    bool save_frames_flag = false;
};

int cmd_complete(const CommonOpts& common, const CompleteOpts& o) {
    QTensor3 M;
    if (!o.tensor.empty())
        M = read_qt3(o.tensor);
    else if (!o.frames.empty())
        M = encode_quaternion(load_frames(o.frames));
    else
        throw ConfigError("complete needs --tensor or --frames");
    if (o.mask.empty()) throw ConfigError("complete needs --mask");
    const ObservationMask mask = read_mask(o.mask);
    if (mask.n1() != M.n1() || mask.n2() != M.n2() || mask.n3() != M.n3())
        throw DimensionMismatch("mask shape does not match the input tensor");

    SolverConfig cfg;
    cfg.mu = parse_mu(common.mu);
    cfg.lambda = o.lambda;
    cfg.lambda1 = o.lambda1;
    cfg.lambda2 = o.lambda2;
    cfg.beta = o.beta;
    cfg.alpha = parse_alpha(o.alpha);
    cfg.epsilon = o.epsilon;
    cfg.max_outer = o.max_outer;
    cfg.max_inner = o.max_inner;
    cfg.seed = common.seed;
    if (!o.rank_file.empty()) {
        std::ifstream rin(o.rank_file);
        if (!rin) throw ConfigError("cannot open rank file: " + o.rank_file);
        json rj;
        rin >> rj;
        if (!rj.is_array() || rj.empty())
            throw ConfigError("--rank-file must hold a nonempty JSON array of ranks");
        cfg.rank = rj.get<std::vector<int>>();
    } else {
        cfg.rank = {o.rank};
    }

    if (o.algo != "qrtc" && o.algo != "mqrtc")
        throw ConfigError("--algo must be qrtc or mqrtc");

    const fs::path dir = make_out_dir(common.out);
    const CompletionResult res =
        o.algo == "qrtc" ? qrtc(M, mask, cfg) : mqrtc(M, mask, cfg);

    write_qt3(res.C_hat, (dir / "c_hat.qt3").string());
    write_trace_csv(res.trace, (dir / "trace.csv").string());
    if (o.save_frames_flag) save_frames(decode_quaternion(res.C_hat), (dir / "frames").string());

    json cj;
    cj["command"] = "complete";
    cj["algo"] = o.algo;
    cj["tensor"] = o.tensor;
    cj["frames"] = o.frames;
    cj["mask"] = o.mask;
    cj["truth"] = o.truth;
    cj["rank"] = o.rank;
    if (!o.rank_file.empty()) cj["rank-file"] = o.rank_file;
    cj["lambda"] = o.lambda;
    cj["lambda1"] = o.lambda1;
    cj["lambda2"] = o.lambda2;
    cj["beta"] = o.beta;
    cj["alpha"] = o.alpha;
    cj["epsilon"] = o.epsilon;
    cj["max-outer"] = o.max_outer;
    cj["max-inner"] = o.max_inner;
    cj["save-frames"] = o.save_frames_flag;
    common.stamp(cj);
    write_json(cj, dir / "config.json");

    // When the full input tensor doubles as ground truth (the synthetic
    // pipeline) or an explicit truth is given, score the recovery.
    std::string truth_path = o.truth;
    if (truth_path.empty() && !o.tensor.empty()) truth_path = o.tensor;
    if (!truth_path.empty()) {
        const QTensor3 truth = read_qt3(truth_path);
        const json mj = metrics_json(truth, res.C_hat);
        write_json(mj, dir / "metrics.json");
        print_metrics(mj);
    }
    std::cout << "outer iterations " << res.iterations << ", final relative change "
              << res.final_relative_change << ", wall " << res.wall_time_ms << " ms\n";
    return 0;
}

int cmd_svd(const CommonOpts& common, const std::string& tensor) {
    if (tensor.empty()) throw ConfigError("svd needs --tensor");
    const QTensor3 T = read_qt3(tensor);
    const PureUnitQuaternion mu = parse_mu(common.mu);
    const fs::path dir = make_out_dir(common.out);

    std::ofstream csv(dir / "singular_values.csv");
    if (!csv) throw IoError("cannot write singular_values.csv");
    csv.precision(17);
    csv << "mode,slice_index,sv_index,value\n";
    for (int w = 1; w <= 3; ++w) {
        const auto prof = singular_value_profile(T, mu, w);
        for (std::size_t l = 0; l < prof.size(); ++l)
            for (std::size_t t = 0; t < prof[l].size(); ++t)
                csv << w << "," << l << "," << t << "," << prof[l][t] << "\n";
    }

    json cfg;
    cfg["command"] = "svd";
    cfg["tensor"] = tensor;
    common.stamp(cfg);
    write_json(cfg, dir / "config.json");

    std::cout << "wrote " << (dir / "singular_values.csv").string() << "\n"
              << "gqt_rank " << gqt_rank(T, mu) << "\n";
    return 0;
}

int cmd_metrics(const std::string& truth, const std::string& estimate, const std::string& out) {
    if (truth.empty() || estimate.empty())
        throw ConfigError("metrics needs --truth and --estimate");
    const json mj = metrics_json(read_qt3(truth), read_qt3(estimate));
    print_metrics(mj);
    if (!out.empty()) write_json(mj, make_out_dir(out) / "metrics.json");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quaternion tensor completion toolkit"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a low-rank synthetic tensor");
    CommonOpts synth_common;
    std::string synth_shape;
    int synth_rank = 2;
    synth_common.attach(synth, true);
    auto* synth_shape_opt = synth->add_option("--shape", synth_shape, "n1,n2,n3");
    auto* synth_rank_opt = synth->add_option("--rank", synth_rank, "target gqt-rank");

    // mask
    auto* mask = app.add_subcommand("mask", "sample an observation mask");
    CommonOpts mask_common;
    std::string mask_shape, mask_tensor;
    double mask_rho = 0.3;
    mask_common.attach(mask, true);
    auto* mask_shape_opt = mask->add_option("--shape", mask_shape, "n1,n2,n3");
    auto* mask_tensor_opt = mask->add_option("--tensor", mask_tensor, "take the shape from a QT3 file");
    auto* mask_rho_opt = mask->add_option("--rho", mask_rho, "observed fraction in [0,1]");

    // complete
    auto* complete = app.add_subcommand("complete", "low-rank completion (qrtc | mqrtc)");
    CommonOpts c_common;
    CompleteOpts c;
    c_common.attach(complete, true);
    auto* c_tensor = complete->add_option("--tensor", c.tensor, "input QT3 tensor");
    auto* c_frames = complete->add_option("--frames", c.frames, "input PNG frame directory");
    auto* c_mask = complete->add_option("--mask", c.mask, "QM3 observation mask");
    auto* c_truth = complete->add_option("--truth", c.truth, "ground-truth QT3 for scoring");
    auto* c_algo = complete->add_option("--algo", c.algo, "qrtc | mqrtc");
    auto* c_rank = complete->add_option("--rank", c.rank, "factor rank");
    auto* c_rank_file =
        complete->add_option("--rank-file", c.rank_file, "JSON array of per-slice ranks");
    auto* c_lambda = complete->add_option("--lambda", c.lambda, "factor energy weight");
    auto* c_lambda1 = complete->add_option("--lambda1", c.lambda1, "mode-1 smoothness weight");
    auto* c_lambda2 = complete->add_option("--lambda2", c.lambda2, "mode-2 smoothness weight");
    auto* c_beta = complete->add_option("--beta", c.beta, "proximal damping");
    auto* c_alpha = complete->add_option("--alpha", c.alpha, "mqrtc mode weights a1,a2,a3");
    auto* c_eps = complete->add_option("--epsilon", c.epsilon, "outer stopping tolerance");
    auto* c_mo = complete->add_option("--max-outer", c.max_outer, "outer iteration cap");
    auto* c_mi = complete->add_option("--max-inner", c.max_inner, "inner iteration cap");
    auto* c_sf = complete->add_flag("--save-frames", c.save_frames_flag, "also write PNG frames");

    // svd
    auto* svd = app.add_subcommand("svd", "singular value profiles for modes 1-3");
    CommonOpts svd_common;
    std::string svd_tensor;
    svd_common.attach(svd, true);
    auto* svd_tensor_opt = svd->add_option("--tensor", svd_tensor, "input QT3 tensor");

    // metrics
    auto* metrics = app.add_subcommand("metrics", "score an estimate against ground truth");
    std::string m_truth, m_estimate, m_out, m_config;
    auto* m_truth_opt = metrics->add_option("--truth", m_truth, "ground-truth QT3");
    auto* m_est_opt = metrics->add_option("--estimate", m_estimate, "estimate QT3");
    metrics->add_option("--out", m_out, "optional output directory");
    metrics->add_option("--config", m_config, "JSON config file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth) {
            const json f = load_config_file(synth_common.config_path);
            synth_common.merge_common(f);
            merge(f, synth_shape_opt, "shape", synth_shape);
            merge(f, synth_rank_opt, "rank", synth_rank);
            if (synth_shape.empty()) throw ConfigError("synth needs --shape");
            return cmd_synth(synth_common, synth_shape, synth_rank);
        }
        if (*mask) {
            const json f = load_config_file(mask_common.config_path);
            mask_common.merge_common(f);
            merge(f, mask_shape_opt, "shape", mask_shape);
            merge(f, mask_tensor_opt, "tensor", mask_tensor);
            merge(f, mask_rho_opt, "rho", mask_rho);
            return cmd_mask(mask_common, mask_shape, mask_tensor, mask_rho);
        }
        if (*complete) {
            const json f = load_config_file(c_common.config_path);
            c_common.merge_common(f);
            merge(f, c_tensor, "tensor", c.tensor);
            merge(f, c_frames, "frames", c.frames);
            merge(f, c_mask, "mask", c.mask);
            merge(f, c_truth, "truth", c.truth);
            merge(f, c_algo, "algo", c.algo);
            merge(f, c_rank, "rank", c.rank);
            merge(f, c_rank_file, "rank-file", c.rank_file);
            merge(f, c_lambda, "lambda", c.lambda);
            merge(f, c_lambda1, "lambda1", c.lambda1);
            merge(f, c_lambda2, "lambda2", c.lambda2);
            merge(f, c_beta, "beta", c.beta);
            merge(f, c_alpha, "alpha", c.alpha);
            merge(f, c_eps, "epsilon", c.epsilon);
            merge(f, c_mo, "max-outer", c.max_outer);
            merge(f, c_mi, "max-inner", c.max_inner);
            merge(f, c_sf, "save-frames", c.save_frames_flag);
            return cmd_complete(c_common, c);
        }
        if (*svd) {
            const json f = load_config_file(svd_common.config_path);
            svd_common.merge_common(f);
            merge(f, svd_tensor_opt, "tensor", svd_tensor);
            return cmd_svd(svd_common, svd_tensor);
        }
        if (*metrics) {
            const json f = load_config_file(m_config);
            merge(f, m_truth_opt, "truth", m_truth);
            merge(f, m_est_opt, "estimate", m_estimate);
            return cmd_metrics(m_truth, m_estimate, m_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
