// Command line front end for the streaming edge filter library.
//
//   sobel5 kernels            print the integer kernel tables
//   sobel5 detect IN OUT      filter an image, write the magnitude
//   sobel5 verify [IN]        compare the fast path against the reference
//   sobel5 bench              throughput table as CSV
//
// Exit codes: 0 success, 1 verification mismatch, 2 usage/config/IO error.

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sobel5/filter_algebra.hpp"
#include "sobel5/image_io.hpp"
#include "sobel5/metrics.hpp"
#include "sobel5/oracle.hpp"
#include "sobel5/pipeline.hpp"
#include "sobel5/synth.hpp"

namespace {

struct RunConfig {
    std::string op = "sobel5_4d";
    std::string backend = "fast";
    std::int64_t a = 1;
    std::string b = "2";
    std::string m = "6";
    std::string n = "4";
    std::string prefetch = "on";
    int lanes = 32;
    std::string pad = "replicate";
    int workers = 1;
    int iters = 100;
    std::vector<int> sizes = {512, 1024, 2048};
    std::uint64_t seed = 1;
    std::string out_path;
    std::string dump_dir;
    std::string random_dims = "256x256";
    bool inject_fault = false;

    std::string input;
    std::string output;
};

sobel5::FilterParams params_of(const RunConfig& cfg) {
    sobel5::FilterParams p;
    p.a = cfg.a;
    auto parse = [](const std::string& text, const char* name) {
        auto r = sobel5::Rational::parse(text);
        if (!r)
            throw sobel5::NonPositiveParam(std::string("cannot parse --") + name + " value '" +
                                           text + "'");
        return *r;
    };
    p.b = parse(cfg.b, "b");
    p.m = parse(cfg.m, "m");
    p.n = parse(cfg.n, "n");
    return p;
}

bool prefetch_on(const RunConfig& cfg) { return cfg.prefetch == "on"; }

std::pair<int, int> parse_dims(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos)
        throw sobel5::NonPositiveParam("expected WxH, got '" + text + "'");
    const int w = std::stoi(text.substr(0, x));
    const int h = std::stoi(text.substr(x + 1));
    if (w <= 0 || h <= 0) throw sobel5::NonPositiveParam("bad dimensions '" + text + "'");
    return {w, h};
}

void print_matrix(std::ostream& os, const std::string& name, const sobel5::Kernel5& k) {
    os << name << ":\n";
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) os << std::setw(7) << k.w[i][j];
        os << "\n";
    }
}

void print_vec5(std::ostream& os, const std::array<std::int32_t, 5>& v) {
    os << "[";
    for (int i = 0; i < 5; ++i) os << (i ? " " : "") << v[i];
    os << "]";
}

void print_counters(std::ostream& os, const sobel5::OpCounters& c) {
    os << "counters: row_conv5_f=" << c.row_conv5_f << " row_conv5_h=" << c.row_conv5_h
       << " row_conv5_k0=" << c.row_conv5_k0 << " row_conv5_k1=" << c.row_conv5_k1
       << " row_diff=" << c.row_diff << " row_conv3_f=" << c.row_conv3_f
       << " row_conv3_h=" << c.row_conv3_h << " mac=" << c.mac << "\n";
}

int cmd_kernels(const RunConfig& cfg) {
    const auto p = params_of(cfg);
    sobel5::validate_params(p);
    std::cout << "parameters: a=" << p.a << " b=" << p.b.str() << " m=" << p.m.str()
              << " n=" << p.n.str() << "\n";
    print_matrix(std::cout, "Kx", sobel5::materialize(p, sobel5::Direction::X));
    print_matrix(std::cout, "Ky", sobel5::materialize(p, sobel5::Direction::Y));
    print_matrix(std::cout, "Kd", sobel5::materialize(p, sobel5::Direction::D));
    print_matrix(std::cout, "Kdt", sobel5::materialize(p, sobel5::Direction::DT));
    const auto sd = sobel5::make_kd_sum_diff(p);
    print_matrix(std::cout, "Kd+", sd.plus);
    print_matrix(std::cout, "Kd-", sd.minus);
    const auto dec = sobel5::decompose_kd_minus(p);
    std::cout << "Kd- factors:\n  deriv: col ";
    print_vec5(std::cout, dec.deriv_term.col);
    std::cout << " row ";
    print_vec5(std::cout, dec.deriv_term.row);
    std::cout << " scale " << dec.deriv_term.scale << "\n  diff:  col ";
    print_vec5(std::cout, dec.diff_term.col);
    std::cout << " row ";
    print_vec5(std::cout, dec.diff_term.row);
    std::cout << " scale " << dec.diff_term.scale << "\n";
    return 0;
}

int cmd_detect(const RunConfig& cfg) {
    const bool three = cfg.op == "sobel3_2d";
    const int radius = three ? 1 : 2;
    const auto p = params_of(cfg);

    sobel5::GrayPlane img = sobel5::load_gray(cfg.input);
    if (cfg.pad == "replicate") img = sobel5::pad_replicate(img, radius).plane;

    sobel5::RealPlane g;
    std::vector<std::pair<std::string, const sobel5::SignedPlane*>> planes;
    sobel5::Sobel5Result ref5;
    sobel5::Sobel3Result ref3;
    sobel5::StreamResult fast5;
    sobel5::Stream3Result fast3;

    if (three) {
        if (cfg.backend == "oracle") {
            ref3 = sobel5::sobel3_2d(img);
            g = ref3.g;
            planes = {{"gx", &ref3.gx}, {"gy", &ref3.gy}};
        } else {
            const auto plan = sobel5::plan_strips(img.width(), cfg.lanes, 1);
            fast3 = sobel5::run_stream_3x3(img, plan,
                                           prefetch_on(cfg) ? sobel5::Prefetch::on
                                                            : sobel5::Prefetch::off,
                                           cfg.workers);
            g = fast3.g;
            planes = {{"gx", &fast3.gx}, {"gy", &fast3.gy}};
            print_counters(std::cout, fast3.counters);
        }
    } else {
        if (cfg.backend == "oracle") {
            ref5 = sobel5::sobel5_4d(img, p);
            g = ref5.g;
            planes = {{"gx", &ref5.gx}, {"gy", &ref5.gy}, {"gd", &ref5.gd}, {"gdt", &ref5.gdt}};
        } else {
            const auto plan = sobel5::plan_strips(img.width(), cfg.lanes, 2);
            fast5 = sobel5::run_stream(img, p, plan,
                                       prefetch_on(cfg) ? sobel5::Prefetch::on
                                                        : sobel5::Prefetch::off,
                                       cfg.workers);
            g = fast5.g;
            planes = {{"gx", &fast5.gx},
                      {"gy", &fast5.gy},
                      {"gd", &fast5.gd},
                      {"gdt", &fast5.gdt}};
            print_counters(std::cout, fast5.counters);
        }
    }

    sobel5::save_plane(g, cfg.output, sobel5::SaveMode::normalize);
    if (!cfg.dump_dir.empty()) {
        std::filesystem::create_directories(cfg.dump_dir);
        for (const auto& [name, plane] : planes)
            sobel5::save_plane(*plane, cfg.dump_dir + "/" + name + ".pgm",
                               sobel5::SaveMode::clamp_abs);
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    const bool three = cfg.op == "sobel3_2d";
    const auto p = params_of(cfg);

    sobel5::GrayPlane img;
    if (!cfg.input.empty()) {
        img = sobel5::load_gray(cfg.input);
    } else {
        const auto [w, h] = parse_dims(cfg.random_dims);
        img = sobel5::synth_random(w, h, cfg.seed);
    }

    const auto prefetch = prefetch_on(cfg) ? sobel5::Prefetch::on : sobel5::Prefetch::off;
    bool identical = true;
    double ssim = 0;

    auto report = [&](const std::string& name, const sobel5::DiffStats& d) {
        std::cout << name << ": max_abs=" << d.max_abs << " mean_abs=" << d.mean_abs
                  << " nonzero=" << d.count_nonzero << "\n";
        identical = identical && d.count_nonzero == 0;
    };

    if (three) {
        const auto plan = sobel5::plan_strips(img.width(), cfg.lanes, 1);
        auto fast = sobel5::run_stream_3x3(img, plan, prefetch, cfg.workers);
        if (cfg.inject_fault) fast.gx.at(0, 0) += 1;
        const auto ref = sobel5::sobel3_2d(img);
        report("gx", sobel5::diff_stats(fast.gx, ref.gx));
        report("gy", sobel5::diff_stats(fast.gy, ref.gy));
        ssim = sobel5::ssim_global(fast.g, ref.g).ssim;
    } else {
        auto taps = sobel5::make_stream_taps(p);
        if (cfg.inject_fault) taps.k0[0] += 2; // even offset keeps recovery parity intact
        const auto plan = sobel5::plan_strips(img.width(), cfg.lanes, 2);
        const auto fast = sobel5::run_stream(img, taps, plan, prefetch, cfg.workers);
        const auto ref = sobel5::sobel5_4d(img, p);
        report("gx", sobel5::diff_stats(fast.gx, ref.gx));
        report("gy", sobel5::diff_stats(fast.gy, ref.gy));
        report("gd", sobel5::diff_stats(fast.gd, ref.gd));
        report("gdt", sobel5::diff_stats(fast.gdt, ref.gdt));
        ssim = sobel5::ssim_global(fast.g, ref.g).ssim;
    }

    std::cout << "ssim: " << std::setprecision(17) << ssim << "\n";
    const bool ok = identical && ssim >= 0.99;
    std::cout << (ok ? "OK" : "MISMATCH") << "\n";
    return ok ? 0 : 1;
}

int cmd_bench(const RunConfig& cfg) {
    const bool three = cfg.op == "sobel3_2d";
    const auto p = params_of(cfg);
    const auto prefetch = prefetch_on(cfg) ? sobel5::Prefetch::on : sobel5::Prefetch::off;

    std::ostringstream csv;
    volatile double sink = 0;
    for (int size : cfg.sizes) {
        const auto img = sobel5::synth_random(size, size, cfg.seed + static_cast<unsigned>(size));
        if (three) {
            const auto plan = sobel5::plan_strips(size, cfg.lanes, 1);
            auto oracle = sobel5::measure("oracle-3x3", size, size, cfg.iters, 1, [&] {
                sink = sink + sobel5::sobel3_2d(img).g.at(0, 0);
            });
            csv << oracle.csv_row() << "\n";
            auto fast = sobel5::measure("fast-3x3", size, size, cfg.iters, cfg.workers, [&] {
                sink = sink + sobel5::run_stream_3x3(img, plan, prefetch, cfg.workers).g.at(0, 0);
            });
            csv << fast.csv_row() << "\n";
        } else {
            const auto plan = sobel5::plan_strips(size, cfg.lanes, 2);
            auto oracle = sobel5::measure("oracle-5x5", size, size, cfg.iters, 1, [&] {
                sink = sink + sobel5::sobel5_4d(img, p).g.at(0, 0);
            });
            csv << oracle.csv_row() << "\n";
            auto fast = sobel5::measure("fast-5x5", size, size, cfg.iters, cfg.workers, [&] {
                sink = sink + sobel5::run_stream(img, p, plan, prefetch, cfg.workers).g.at(0, 0);
            });
            csv << fast.csv_row() << "\n";
        }
    }

    if (cfg.out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(cfg.out_path);
        if (!out) throw sobel5::IoError("cannot write " + cfg.out_path);
        out << csv.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Streaming four-direction 5x5 edge filter"};
    app.set_config("--config", "", "Read defaults from a key = value file");

    app.add_option("--operator", cfg.op, "Filter operator")
        ->check(CLI::IsMember({"sobel5_4d", "sobel3_2d"}))
        ->capture_default_str();
    app.add_option("--backend", cfg.backend, "Execution backend")
        ->check(CLI::IsMember({"fast", "oracle"}))
        ->capture_default_str();
    app.add_option("--a", cfg.a, "Outer integer scale a")->capture_default_str();
    app.add_option("--b", cfg.b, "Derivative weight b")->capture_default_str();
    app.add_option("--m", cfg.m, "Center smoothing weight m")->capture_default_str();
    app.add_option("--n", cfg.n, "Inner smoothing weight n")->capture_default_str();
    app.add_option("--prefetch", cfg.prefetch, "Row lookahead in the streaming core")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    app.add_option("--lanes", cfg.lanes, "Input columns per strip")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--pad", cfg.pad, "Border handling for detect")
        ->check(CLI::IsMember({"replicate", "none"}))
        ->capture_default_str();
    app.add_option("--workers", cfg.workers, "Worker threads for strip execution")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--iters", cfg.iters, "Timed iterations per benchmark point")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--sizes", cfg.sizes, "Square benchmark sizes")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "Seed for synthesized images")->capture_default_str();
    app.add_option("--out", cfg.out_path, "Write benchmark CSV here instead of stdout");
    app.add_option("--dump-planes", cfg.dump_dir, "Directory for the directional planes");
    app.add_option("--random", cfg.random_dims, "Synthesized image size WxH for verify")
        ->capture_default_str();
    app.add_flag("--inject-fault", cfg.inject_fault)->group(""); // test hook, hidden

    app.require_subcommand(1);
    auto* kernels = app.add_subcommand("kernels", "Print kernel tables");
    auto* detect = app.add_subcommand("detect", "Filter an image");
    detect->add_option("input", cfg.input, "Input image (PGM or PNG)")->required();
    detect->add_option("output", cfg.output, "Output magnitude image")->required();
    auto* verify = app.add_subcommand("verify", "Check fast path against the reference");
    verify->add_option("input", cfg.input, "Optional input image");
    auto* bench = app.add_subcommand("bench", "Measure throughput");
    for (auto* sub : {kernels, detect, verify, bench}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(kernels)) return cmd_kernels(cfg);
        if (app.got_subcommand(detect)) return cmd_detect(cfg);
        if (app.got_subcommand(verify)) return cmd_verify(cfg);
        if (app.got_subcommand(bench)) return cmd_bench(cfg);
    } catch (const sobel5::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
