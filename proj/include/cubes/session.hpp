#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cubes/engine.hpp"
#include "cubes/exercises.hpp"
#include "cubes/io.hpp"
#include "cubes/parser.hpp"
#include "cubes/wire.hpp"

namespace cubes {

struct ServiceConfig {
    std::string listen_addr = "127.0.0.1:7878";
    std::chrono::seconds session_ttl{4 * 60 * 60};
    std::string instructor_token;
    std::string fixture_dir;
    std::string cors_origin = "*";
    std::size_t max_source_bytes = 16 * 1024;
};

/// Status code plus JSON body; the HTTP layer is a thin adapter over this.
struct ServiceResponse {
    int status = 200;
    wire::json body;
};

struct HistoryEntry {
    std::string source;
    std::vector<StageTrace> stages;
};

struct Session {
    std::string id;
    CubeFrame initial;
    CubeFrame current;
    std::vector<HistoryEntry> history;
    std::optional<std::string> active_exercise;
    std::atomic<std::chrono::steady_clock::time_point> last_used{};
    std::mutex mu;  // serializes requests within one session
};

/// Re-runs every committed pipeline from the initial frame.
inline CubeFrame replay(const CubeFrame& initial, const std::vector<std::string>& sources) {
    CubeFrame f = initial;
    for (const auto& s : sources) {
        std::string_view body = s;
        if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) continue;
        f = eval_pipeline(f, parse_pipeline(s)).frame;
    }
    return f;
}

/// In-memory sessions with idle eviction. Requests on different sessions run
/// in parallel; requests on the same session take that session's lock.
class SessionService {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;

    SessionService(ServiceConfig config, std::vector<Exercise> bank,
                   Clock clock = [] { return std::chrono::steady_clock::now(); })
        : config_(std::move(config)), bank_(std::move(bank)), clock_(std::move(clock)) {
        for (const auto& id : builtin_fixture_ids()) fixtures_.emplace(id, *builtin_fixture(id));
        if (!config_.fixture_dir.empty()) load_fixture_dir(config_.fixture_dir);
    }

    const ServiceConfig& config() const noexcept { return config_; }

    ServiceResponse create_session(const wire::json& body) {
        evict_expired();
        CubeFrame frame;
        std::optional<std::string> exercise;
        if (body.is_object() && body.contains("exercise_id")) {
            if (!body.at("exercise_id").is_string()) return error(400, "InvalidRequest", "`exercise_id` must be a string");
            auto ex_id = body.at("exercise_id").get<std::string>();
            const Exercise* ex = find_exercise(bank_, ex_id);
            if (!ex) return error(404, "UnknownExercise", "unknown exercise '" + ex_id + "'");
            frame = ex->start_frame;
            exercise = ex->id;
        } else if (body.is_object() && body.contains("frame")) {
            try {
                frame = wire::frame_from_json(body.at("frame"));
            } catch (const WrangleError& e) {
                return {400, {{"error", wire::error_to_json(e)}}};
            }
        } else {
            std::string fixture = "figure1";
            if (body.is_object() && body.contains("fixture")) {
                if (!body.at("fixture").is_string()) return error(400, "InvalidRequest", "`fixture` must be a string");
                fixture = body.at("fixture").get<std::string>();
            }
            auto it = fixtures_.find(fixture);
            if (it == fixtures_.end()) return error(404, "UnknownFixture", "unknown fixture '" + fixture + "'");
            frame = it->second;
        }
        auto s = std::make_shared<Session>();
        s->id = new_id();
        s->initial = frame;
        s->current = frame;
        s->active_exercise = exercise;
        s->last_used = clock_();
        {
            std::lock_guard lock(map_mu_);
            sessions_[s->id] = s;
        }
        return {200, {{"session_id", s->id}, {"frame", wire::frame_to_json(frame)}}};
    }

    ServiceResponse get_session(const std::string& id) {
        auto s = find(id);
        if (!s) return unknown_session(id);
        std::lock_guard lock(s->mu);
        wire::json history = wire::json::array();
        for (const auto& h : s->history) history.push_back(h.source);
        return {200,
                {{"session_id", s->id}, {"frame", wire::frame_to_json(s->current)}, {"history", history},
                 {"active_exercise", s->active_exercise ? wire::json(*s->active_exercise) : wire::json(nullptr)}}};
    }

    ServiceResponse execute(const std::string& id, const wire::json& body) {
        auto s = find(id);
        if (!s) return unknown_session(id);
        if (!body.is_object() || !body.contains("source") || !body.at("source").is_string()) {
            return error(400, "InvalidRequest", "body needs a `source` string");
        }
        const std::string source = body.at("source").get<std::string>();
        if (source.size() > config_.max_source_bytes) {
            return error(413, "SourceTooLarge",
                         "source is " + std::to_string(source.size()) + " bytes; the limit is " +
                             std::to_string(config_.max_source_bytes));
        }
        bool preview = body.contains("preview") && body.at("preview").is_boolean() && body.at("preview").get<bool>();

        std::lock_guard lock(s->mu);
        s->last_used = clock_();
        wire::json out = {{"input", wire::frame_to_json(s->current)}, {"stages", wire::json::array()},
                          {"error", nullptr}, {"committed", false}};

        bool blank = source.find_first_not_of(" \t\r\n") == std::string::npos;
        if (blank) {
            out["frame"] = wire::frame_to_json(s->current);
            return {200, out};
        }

        PipelineRun run;
        try {
            run = run_pipeline(s->current, parse_pipeline(source));
        } catch (const WrangleError& e) {
            out["frame"] = wire::frame_to_json(s->current);
            out["error"] = wire::error_to_json(e);
            return {200, out};
        }
        for (const auto& st : run.stages) out["stages"].push_back(wire::stage_to_json(st));
        out["frame"] = wire::frame_to_json(run.frame);
        if (run.error) {
            out["error"] = wire::error_to_json(*run.error);
            return {200, out};
        }
        if (!preview) {
            s->current = run.frame;
            s->history.push_back({source, std::move(run.stages)});
            out["committed"] = true;
        }
        return {200, out};
    }

    ServiceResponse grade_submission(const std::string& id, const wire::json& body) {
        auto s = find(id);
        if (!s) return unknown_session(id);
        if (!body.is_object() || !body.contains("exercise_id") || !body.at("exercise_id").is_string() ||
            !body.contains("source") || !body.at("source").is_string()) {
            return error(400, "InvalidRequest", "body needs `exercise_id` and `source` strings");
        }
        auto ex_id = body.at("exercise_id").get<std::string>();
        const Exercise* ex = find_exercise(bank_, ex_id);
        if (!ex) return error(404, "UnknownExercise", "unknown exercise '" + ex_id + "'");
        auto source = body.at("source").get<std::string>();
        if (source.size() > config_.max_source_bytes) return error(413, "SourceTooLarge", "source too large");
        std::lock_guard lock(s->mu);
        s->last_used = clock_();
        return {200, grade_report_to_json(grade(*ex, source))};
    }

    ServiceResponse list_exercises(bool instructor, std::string_view bearer) const {
        bool reveal = instructor && !config_.instructor_token.empty() && bearer == config_.instructor_token;
        wire::json out = wire::json::array();
        for (const auto& ex : bank_) {
            wire::json j = {{"id", ex.id},
                            {"prompt", ex.prompt},
                            {"mode", std::string(to_string(ex.expected.mode))},
                            {"start_frame", wire::frame_to_json(ex.start_frame)}};
            if (reveal) j["model_solution"] = ex.model_solution;
            out.push_back(std::move(j));
        }
        return {200, out};
    }

    ServiceResponse list_fixtures() const {
        wire::json out = wire::json::array();
        for (const auto& [id, f] : fixtures_) out.push_back({{"id", id}, {"nrows", f.nrows()}, {"ncols", f.ncols()}});
        return {200, out};
    }

    ServiceResponse export_session(const std::string& id) {
        auto s = find(id);
        if (!s) return unknown_session(id);
        std::lock_guard lock(s->mu);
        wire::json sources = wire::json::array();
        for (const auto& h : s->history) sources.push_back(h.source);
        return {200,
                {{"initial", wire::frame_to_json(s->initial)},
                 {"history", sources},
                 {"current", wire::frame_to_json(s->current)},
                 {"active_exercise", s->active_exercise ? wire::json(*s->active_exercise) : wire::json(nullptr)}}};
    }

    /// Rebuilds a session from an export by replaying its history.
    ServiceResponse import_session(const wire::json& body) {
        evict_expired();
        if (!body.is_object() || !body.contains("initial") || !body.contains("history") ||
            !body.at("history").is_array()) {
            return error(400, "InvalidRequest", "export needs `initial` and `history`");
        }
        auto s = std::make_shared<Session>();
        try {
            s->initial = wire::frame_from_json(body.at("initial"));
            std::vector<std::string> sources;
            for (const auto& h : body.at("history")) sources.push_back(h.get<std::string>());
            CubeFrame f = s->initial;
            for (const auto& src : sources) {
                auto res = eval_pipeline(f, parse_pipeline(src));
                s->history.push_back({src, res.stages});
                f = res.frame;
            }
            s->current = f;
            if (body.contains("current") && wire::frame_from_json(body.at("current")) != f) {
                return error(400, "ReplayMismatch", "history does not reproduce the exported frame");
            }
        } catch (const WrangleError& e) {
            return {400, {{"error", wire::error_to_json(e)}}};
        } catch (const wire::json::exception& e) {
            return error(400, "InvalidRequest", e.what());
        }
        if (body.contains("active_exercise") && body.at("active_exercise").is_string()) {
            s->active_exercise = body.at("active_exercise").get<std::string>();
        }
        s->id = new_id();
        s->last_used = clock_();
        {
            std::lock_guard lock(map_mu_);
            sessions_[s->id] = s;
        }
        return {200, {{"session_id", s->id}, {"frame", wire::frame_to_json(s->current)}}};
    }

    std::size_t evict_expired() {
        auto now = clock_();
        std::lock_guard lock(map_mu_);
        std::size_t n = 0;
        for (auto it = sessions_.begin(); it != sessions_.end();) {
            if (now - it->second->last_used.load() > config_.session_ttl) {
                it = sessions_.erase(it);
                ++n;
            } else {
                ++it;
            }
        }
        return n;
    }

    std::size_t session_count() const {
        std::lock_guard lock(map_mu_);
        return sessions_.size();
    }

private:
    static ServiceResponse error(int status, std::string kind, std::string message) {
        return {status, {{"error", {{"kind", std::move(kind)}, {"message", std::move(message)}}}}};
    }

    static ServiceResponse unknown_session(const std::string& id) {
        return error(404, "UnknownSession", "no session '" + id + "'");
    }

    std::shared_ptr<Session> find(const std::string& id) {
        evict_expired();
        std::lock_guard lock(map_mu_);
        auto it = sessions_.find(id);
        return it == sessions_.end() ? nullptr : it->second;
    }

    std::string new_id() {
        std::lock_guard lock(rng_mu_);
        static constexpr char hex[] = "0123456789abcdef";
        std::string id;
        for (int i = 0; i < 32; ++i) id += hex[rng_() % 16];
        return id;
    }

    void load_fixture_dir(const std::filesystem::path& dir) {
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            auto ext = entry.path().extension();
            if (ext != ".csv" && ext != ".json") continue;
            fixtures_.insert_or_assign(entry.path().stem().string(), load_frame(entry.path()));
        }
    }

    ServiceConfig config_;
    std::vector<Exercise> bank_;
    Clock clock_;
    std::map<std::string, CubeFrame> fixtures_;
    mutable std::mutex map_mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mutex rng_mu_;
    std::mt19937_64 rng_{std::random_device{}()};
};

}  // namespace cubes
