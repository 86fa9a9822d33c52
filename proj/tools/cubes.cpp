// cubes: REPL, script runner, renderer, exercise checker and HTTP service.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include <pthread.h>

#include <CLI11.hpp>

#include "cubes/exercises.hpp"
#include "cubes/http_service.hpp"
#include "cubes/io.hpp"
#include "cubes/render.hpp"
#include "cubes/repl.hpp"
#include "cubes/session.hpp"

namespace {

constexpr int exit_parse = 2;
constexpr int exit_eval = 3;
constexpr int exit_io = 4;
constexpr int exit_bind = 5;

int exit_code_for(const cubes::WrangleError& e) {
    if (cubes::is_syntax_error(e.kind())) return exit_parse;
    if (e.kind() == cubes::ErrorKind::io) return exit_io;
    return exit_eval;
}

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : std::move(fallback);
}

// --data accepts a file path or the id of a built-in fixture.
cubes::CubeFrame load_data(const std::string& data) {
    if (!std::filesystem::exists(data)) {
        if (auto f = cubes::builtin_fixture(data)) return *f;
    }
    return cubes::load_frame(data);
}

std::vector<cubes::Exercise> load_bank(const std::string& path) {
    if (path.empty()) return cubes::builtin_exercises();
    return cubes::parse_exercise_bank(cubes::read_text_file(path));
}

cubes::RenderMode parse_mode(const std::string& m) {
    return m == "table" ? cubes::RenderMode::table : cubes::RenderMode::ascii_cubes;
}

int cmd_repl(const std::string& data, const std::string& bank_path, cubes::RenderOptions opt) {
    cubes::Repl repl(load_data(data), opt, load_bank(bank_path));
    std::cout << "cubes: type :help for commands\n" << cubes::render_frame(repl.frame(), opt);
    std::string line;
    while (!repl.done()) {
        std::cout << repl.prompt() << std::flush;
        if (!std::getline(std::cin, line)) break;
        std::cout << repl.handle(line);
    }
    return 0;
}

int cmd_run(const std::string& script_path, const std::string& data, const std::string& out_path,
            std::string format) {
    std::string script = cubes::read_text_file(script_path);
    cubes::CubeFrame input = load_data(data);
    std::string source = cubes::normalize_script(script);
    cubes::CubeFrame result;
    try {
        result = cubes::eval_pipeline(input, cubes::parse_pipeline(source)).frame;
    } catch (const cubes::WrangleError& e) {
        std::cerr << cubes::format_error(e, source);
        return exit_code_for(e);
    }
    if (format.empty()) format = std::filesystem::path(out_path).extension() == ".json" ? "json" : "csv";
    std::string text = format == "json" ? cubes::to_json_text(result) : cubes::to_csv(result);
    if (out_path.empty()) std::cout << text;
    else cubes::write_text_file(out_path, text);
    return 0;
}

int cmd_serve(cubes::ServiceConfig config, const std::string& bank_path) {
    auto addr = cubes::parse_listen_addr(config.listen_addr);
    if (!addr) {
        std::cerr << "cubes serve: bad listen address '" << config.listen_addr << "'\n";
        return exit_bind;
    }
    cubes::SessionService service(config, load_bank(bank_path));
    httplib::Server server;
    cubes::install_routes(server, service, [](const std::string& line) { std::cerr << line << std::endl; });

    // SIGINT/SIGTERM are handled on a dedicated thread so the server can drain cleanly.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    if (!server.bind_to_port(addr->first, addr->second)) {
        std::cerr << "cubes serve: cannot bind " << config.listen_addr << "\n";
        return exit_bind;
    }
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    });
    std::cerr << "listening on " << addr->first << ":" << addr->second << std::endl;
    server.listen_after_bind();
    // Wake the waiter if the server stopped for some other reason.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    std::cerr << "stopped" << std::endl;
    return 0;
}

int cmd_exercises_list(const std::string& bank_path) {
    for (const auto& ex : load_bank(bank_path)) std::cout << ex.id << "\t" << ex.prompt << "\n";
    return 0;
}

int cmd_exercises_check(const std::string& bank_path, const std::string& id, const std::string& answer_path,
                        bool json) {
    auto bank = load_bank(bank_path);
    const cubes::Exercise* ex = cubes::find_exercise(bank, id);
    if (!ex) {
        std::cerr << "unknown exercise '" << id << "'\n";
        return 1;
    }
    std::string answer = cubes::read_text_file(answer_path);
    std::string submission =
        ex->expected.mode == cubes::ExpectedMode::scalar_answers ? answer : cubes::normalize_script(answer);
    cubes::GradeReport report = cubes::grade(*ex, submission);
    if (json) {
        std::cout << cubes::grade_report_to_json(report).dump(2) << "\n";
    } else {
        std::cout << cubes::to_string(report.verdict) << "\n";
        if (!report.summary.empty() && report.verdict != cubes::Verdict::correct) {
            std::cout << "  " << report.summary << "\n";
        }
        for (const auto& p : report.triggered_pitfalls) std::cout << "  hint: " << p << "\n";
    }
    return report.verdict == cubes::Verdict::correct ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cubes: tidy-data verbs on a grid of coloured cubes"};
    app.require_subcommand(1);

    std::string data = "figure1";
    std::string bank_path;
    bool no_color = false;
    std::string mode = "ascii";
    std::size_t width = 80;

    auto* repl = app.add_subcommand("repl", "interactive pipeline session");
    repl->add_option("--data", data, "CSV/JSON file or fixture id");
    repl->add_option("--bank", bank_path, "exercise bank JSON");
    repl->add_flag("--no-color", no_color, "letters instead of coloured glyphs");
    repl->add_option("--mode", mode)->check(CLI::IsMember({"ascii", "table"}));

    std::string script_path, out_path, format;
    auto* run = app.add_subcommand("run", "run a pipeline script");
    run->add_option("script", script_path)->required();
    run->add_option("--data", data, "CSV/JSON file or fixture id");
    run->add_option("--out", out_path);
    run->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    auto* render = app.add_subcommand("render", "draw a data set as cubes");
    render->add_option("--data", data, "CSV/JSON file or fixture id");
    render->add_option("--mode", mode)->check(CLI::IsMember({"ascii", "table"}));
    render->add_flag("--no-color", no_color);
    render->add_option("--width", width);

    cubes::ServiceConfig config;
    config.listen_addr = env_or("LISTEN_ADDR", config.listen_addr);
    config.instructor_token = env_or("INSTRUCTOR_TOKEN", "");
    config.fixture_dir = env_or("FIXTURE_DIR", "");
    long ttl_secs = std::strtol(env_or("SESSION_TTL_SECS", "14400").c_str(), nullptr, 10);
    auto* serve = app.add_subcommand("serve", "run the HTTP service");
    serve->add_option("--listen", config.listen_addr, "host:port");
    serve->add_option("--ttl", ttl_secs, "idle session lifetime in seconds");
    serve->add_option("--instructor-token", config.instructor_token);
    serve->add_option("--fixture-dir", config.fixture_dir);
    serve->add_option("--cors-origin", config.cors_origin);
    serve->add_option("--bank", bank_path, "exercise bank JSON");

    auto* exercises = app.add_subcommand("exercises", "list or check exercises");
    exercises->require_subcommand(1);
    exercises->add_option("--bank", bank_path, "exercise bank JSON");
    auto* ex_list = exercises->add_subcommand("list");
    std::string ex_id, answer_path;
    bool json_out = false;
    auto* ex_check = exercises->add_subcommand("check");
    ex_check->add_option("id", ex_id)->required();
    ex_check->add_option("--answer", answer_path, "file holding the answer")->required();
    ex_check->add_flag("--json", json_out);

    CLI11_PARSE(app, argc, argv);

    cubes::RenderOptions opt;
    opt.mode = parse_mode(mode);
    opt.color = !no_color;
    opt.width = width;

    try {
        if (*repl) return cmd_repl(data, bank_path, opt);
        if (*run) return cmd_run(script_path, data, out_path, format);
        if (*render) {
            std::cout << cubes::render_frame(load_data(data), opt);
            return 0;
        }
        if (*serve) {
            config.session_ttl = std::chrono::seconds(ttl_secs > 0 ? ttl_secs : 14400);
            return cmd_serve(config, bank_path);
        }
        if (*ex_list) return cmd_exercises_list(bank_path);
        if (*ex_check) return cmd_exercises_check(bank_path, ex_id, answer_path, json_out);
    } catch (const cubes::WrangleError& e) {
        std::cerr << cubes::format_error(e, "");
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
