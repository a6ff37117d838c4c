#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "splash/engine.hpp"
#include "splash/frame.hpp"
#include "splash/scene.hpp"

namespace fs = std::filesystem;
using namespace splash;

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest decimal that parses back to the same double.
std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const fs::path& path, const void* data, std::size_t n) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(static_cast<const char*>(data), std::streamsize(n));
    if (!out) throw IoError("write failed: " + path.string());
}

int cmd_run(const std::string& scene_path, const std::string& out_dir,
            const std::string& format, bool validate, int threads) {
    Scene sc = scene::load_file(scene_path);
    if (!format.empty()) sc.format = format;

    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    engine::set_threads(threads);
    SimState st = engine::init_state(sc);
    engine::RunConfig cfg;
    cfg.steps = engine::steps_for_duration(sc.duration, sc.params.dt);
    cfg.stride = engine::frame_stride(sc.frame_interval, sc.params.dt);
    cfg.validate = validate;

    std::ofstream csv(dir / "diagnostics.csv");
    if (!csv) throw IoError("cannot open diagnostics.csv for writing");
    csv << "step,time,column_volume,airborne_volume,destroyed_volume,"
           "clamp_discarded,boundary_flux,max_height,max_speed";
    for (std::size_t k = 0; k < st.objects.size(); ++k)
        csv << ",obj" << k << "_s,obj" << k << "_sdot,obj" << k << "_fo";
    csv << '\n';

    int frame_no = 0;
    auto on_frame = [&](const Frame& f) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06d.%s", frame_no++,
                      sc.format == "bin" ? "bin" : "txt");
        if (sc.format == "bin") {
            auto bytes = frame::write_binary(f);
            write_file(dir / name, bytes.data(), bytes.size());
        } else {
            std::string text = frame::write_text(f);
            write_file(dir / name, text.data(), text.size());
        }
    };
    auto on_diag = [&](const SimState& s) {
        csv << s.step_count << ',' << g17(s.clock) << ',' << g17(s.grid.total_volume()) << ','
            << g17(s.pool.airborne_volume(s.params)) << ','
            << g17(s.pool.destroyed_volume(s.params)) << ',' << g17(s.ledger.clamp_discarded)
            << ',' << g17(s.ledger.boundary_flux) << ',' << g17(s.grid.max_height()) << ','
            << g17(s.max_surface_speed);
        for (const RigidObject& o : s.objects)
            csv << ',' << g17(o.s) << ',' << g17(o.s_dot) << ',' << g17(o.f_o);
        csv << '\n';
    };

    engine::RunResult res = engine::run(st, cfg, on_frame, on_diag);
    csv.close();
    if (!csv) throw IoError("write failed: diagnostics.csv");

    if (validate && !res.ledger_ok) {
        std::fprintf(stderr, "ledger breach at step %lld: relative error %.3g exceeds %.3g\n",
                     static_cast<long long>(res.worst_step), res.worst_rel_err,
                     engine::ledger_tolerance(res.worst_step));
        return 3;
    }
    std::printf("%lld steps, %lld frames -> %s (ledger rel err %.3g)\n",
                static_cast<long long>(res.steps_done), static_cast<long long>(res.frames),
                dir.string().c_str(), engine::ledger_relative_error(st));
    return 0;
}

int cmd_check(const std::string& scene_path) {
    Scene sc = scene::load_file(scene_path);
    const auto steps = engine::steps_for_duration(sc.duration, sc.params.dt);
    const auto stride = engine::frame_stride(sc.frame_interval, sc.params.dt);
    std::printf("grid:      %d x %d columns, cell %s x %s m\n", sc.nx, sc.ny,
                g17(sc.params.dx).c_str(), g17(sc.params.dy).c_str());
    std::printf("run:       %lld steps of dt = %s s over %s s, %lld frames\n",
                static_cast<long long>(steps), g17(sc.params.dt).c_str(),
                g17(sc.duration).c_str(), static_cast<long long>(steps / stride + 1));
    std::printf("objects:   %zu\n", sc.objects.size());

    scene::CflReport rep = scene::cfl_report(sc);
    std::printf("stability: max depth %s m, dt bound %s s, dt/bound = %.3g\n",
                g17(rep.max_depth).c_str(), g17(rep.bound).c_str(), rep.dt / rep.bound);
    if (rep.ok)
        std::printf("time step OK\n");
    else
        std::printf("WARNING: dt exceeds the stable bound; expect rough water and clamping\n");
    return 0;
}

int cmd_bench(const std::string& scene_path, long long steps, int threads) {
    Scene sc = scene::load_file(scene_path);
    engine::set_threads(threads);
    SimState st = engine::init_state(sc);
    engine::RunConfig cfg;
    cfg.steps = steps;
    cfg.timing = true;

    auto t0 = std::chrono::steady_clock::now();
    engine::RunResult res = engine::run(st, cfg, {}, {});
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::printf("%lld steps on %d x %d in %.3f s: %.0f steps/s, real-time ratio %.2fx\n",
                static_cast<long long>(res.steps_done), sc.nx, sc.ny, wall,
                double(res.steps_done) / wall, double(res.steps_done) * sc.params.dt / wall);
    const PhaseTimes& ph = res.phases;
    const double tot = ph.total() > 0 ? ph.total() : 1.0;
    auto line = [&](const char* name, double s) {
        std::printf("  %-8s %8.3f s  %5.1f%%\n", name, s, 100.0 * s / tot);
    };
    line("objects", ph.objects);
    line("flows", ph.flows);
    line("volumes", ph.volumes);
    line("surface", ph.surface);
    line("spray", ph.spray);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic splashing-fluid simulator"};
    app.require_subcommand(1);

    std::string scene_path, out_dir, format;
    bool validate = false;
    int threads = 0;
    long long bench_steps = 1000;

    CLI::App* run = app.add_subcommand("run", "simulate a scene; write frames and diagnostics");
    run->add_option("scene", scene_path, "scene file")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--format", format, "frame format, overrides the scene")
        ->check(CLI::IsMember({"bin", "text"}));
    run->add_flag("--validate", validate, "assert volume-ledger closure every step");
    run->add_option("--threads", threads, "worker threads (0 = leave the default)");

    CLI::App* check = app.add_subcommand("check", "parse a scene and report stability");
    check->add_option("scene", scene_path, "scene file")->required();

    CLI::App* bench = app.add_subcommand("bench", "time a scene without writing output");
    bench->add_option("scene", scene_path, "scene file")->required();
    bench->add_option("--steps", bench_steps, "steps to run")->check(CLI::PositiveNumber);
    bench->add_option("--threads", threads, "worker threads (0 = leave the default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(scene_path, out_dir, format, validate, threads);
        if (check->parsed()) return cmd_check(scene_path);
        return cmd_bench(scene_path, bench_steps, threads);
    } catch (const SceneError& e) {
        if (e.line > 0)
            std::fprintf(stderr, "scene error (line %d): %s\n", e.line, e.what());
        else
            std::fprintf(stderr, "scene error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
