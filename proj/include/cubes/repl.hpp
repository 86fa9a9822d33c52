#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cubes/engine.hpp"
#include "cubes/exercises.hpp"
#include "cubes/io.hpp"
#include "cubes/parser.hpp"
#include "cubes/render.hpp"

namespace cubes {

namespace script_detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

inline bool starts_with_data(std::string_view s) {
    if (s.substr(0, 4) != "data") return false;
    if (s.size() == 4) return true;
    char c = s[4];
    return !((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '.');
}

inline int paren_depth(std::string_view s) {
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
    }
    return depth;
}

}  // namespace script_detail

/// Scripts are either a full `data |> ...` pipeline or one verb per line
/// (a verb may span lines while its parentheses are open). Blank input is
/// the identity pipeline.
inline std::string normalize_script(std::string_view text) {
    using namespace script_detail;
    std::string_view body = trim(text);
    if (body.empty()) return "data";
    if (starts_with_data(body)) return std::string(text);

    std::vector<std::string> stages;
    std::string cur;
    int depth = 0;
    std::size_t start = 0;
    while (start <= body.size()) {
        std::size_t end = body.find('\n', start);
        if (end == std::string_view::npos) end = body.size();
        std::string_view line = trim(body.substr(start, end - start));
        start = end + 1;
        if (depth == 0) {
            if (line.substr(0, 2) == "|>") line = trim(line.substr(2));
        }
        if (line.size() >= 2 && line.substr(line.size() - 2) == "|>") line = trim(line.substr(0, line.size() - 2));
        if (line.empty()) continue;
        if (!cur.empty()) cur += depth > 0 ? "\n" : "";
        cur += line;
        depth += paren_depth(line);
        if (depth <= 0) {
            stages.push_back(std::move(cur));
            cur.clear();
            depth = 0;
        }
    }
    if (!cur.empty()) stages.push_back(std::move(cur));
    std::string out = "data";
    for (const auto& s : stages) out += " |> " + s;
    return out;
}

/// Line-oriented interactive session. `handle` takes one input line and
/// returns the text to show; input errors never end the session.
class Repl {
public:
    Repl(CubeFrame initial, RenderOptions options, std::vector<Exercise> bank)
        : initial_(initial), current_(std::move(initial)), options_(options), bank_(std::move(bank)) {}

    bool done() const noexcept { return done_; }
    bool needs_more() const noexcept { return !pending_.empty(); }
    const CubeFrame& frame() const noexcept { return current_; }
    const std::string& last_source() const noexcept { return last_source_; }

    std::string prompt() const { return needs_more() ? "...> " : "cubes> "; }

    std::string handle(std::string_view line) {
        std::string_view t = script_detail::trim(line);
        if (pending_.empty() && !t.empty() && t.front() == ':') return meta(t);

        pending_ += std::string(line);
        pending_ += '\n';
        std::string_view p = script_detail::trim(pending_);
        bool open = script_detail::paren_depth(p) > 0 || (p.size() >= 2 && p.substr(p.size() - 2) == "|>");
        if (open) return "";
        std::string source = normalize_script(pending_);
        pending_.clear();
        if (source == "data") return render_frame(current_, options_);
        return run(source);
    }

private:
    std::string run(const std::string& source) {
        std::string out;
        try {
            PipelineAst ast = parse_pipeline(source);
            PipelineResult res = eval_pipeline(current_, ast);
            for (std::size_t i = 0; i < res.stages.size(); ++i) {
                const auto& st = res.stages[i];
                out += "-- stage " + std::to_string(i + 1) + ": " + pretty_print(st.verb) + "\n";
                out += render_frame(st.output, options_);
                out += "   " + describe_diff(st.diff) + "\n";
                for (const auto& n : st.notes) out += "   note: " + n + "\n";
            }
            history_.push_back(current_);
            current_ = res.frame;
            last_source_ = source;
        } catch (const WrangleError& e) {
            out += format_error(e, source);
        }
        return out;
    }

    std::string meta(std::string_view cmd) {
        std::string_view name = cmd, arg;
        if (auto sp = cmd.find(' '); sp != std::string_view::npos) {
            name = cmd.substr(0, sp);
            arg = script_detail::trim(cmd.substr(sp + 1));
        }
        try {
            if (name == ":quit" || name == ":q") {
                done_ = true;
                return "";
            }
            if (name == ":help") return help();
            if (name == ":show") return render_frame(current_, options_);
            if (name == ":undo") {
                if (history_.empty()) return "nothing to undo\n";
                current_ = history_.back();
                history_.pop_back();
                return render_frame(current_, options_);
            }
            if (name == ":reset") {
                history_.push_back(current_);
                current_ = initial_;
                return render_frame(current_, options_);
            }
            if (name == ":load") {
                if (arg.empty()) return "usage: :load PATH\n";
                CubeFrame f = load_frame(std::filesystem::path(std::string(arg)));
                history_.push_back(current_);
                initial_ = f;
                current_ = std::move(f);
                return render_frame(current_, options_);
            }
            if (name == ":save") {
                if (arg.empty()) return "usage: :save PATH\n";
                std::filesystem::path path{std::string(arg)};
                if (path.extension() == ".json") save_json(current_, path);
                else save_csv(current_, path);
                return "saved " + path.string() + "\n";
            }
            if (name == ":mode") {
                if (arg == "table") options_.mode = RenderMode::table;
                else if (arg == "ascii" || arg == "cubes") options_.mode = RenderMode::ascii_cubes;
                else return "usage: :mode ascii|table\n";
                return render_frame(current_, options_);
            }
            if (name == ":exercises") {
                std::string out;
                for (const auto& ex : bank_) out += ex.id + "  " + ex.prompt + "\n";
                return out;
            }
            if (name == ":check") {
                // `:check ID` grades the last pipeline; `:check ID answer...` grades the given answer.
                std::string_view id = arg, answer;
                if (auto sp = arg.find(' '); sp != std::string_view::npos) {
                    id = arg.substr(0, sp);
                    answer = script_detail::trim(arg.substr(sp + 1));
                }
                const Exercise* ex = find_exercise(bank_, id);
                if (!ex) return "unknown exercise '" + std::string(id) + "'\n";
                if (!answer.empty()) {
                    std::string sub = ex->expected.mode == ExpectedMode::scalar_answers ? std::string(answer)
                                                                                        : normalize_script(answer);
                    return describe(grade(*ex, sub));
                }
                if (last_source_.empty()) return "run a pipeline first, then :check " + ex->id + "\n";
                return describe(grade(*ex, last_source_));
            }
        } catch (const WrangleError& e) {
            return format_error(e, "");
        }
        return "unknown command " + std::string(name) + " (try :help)\n";
    }

    static std::string describe(const GradeReport& r) {
        std::string out(to_string(r.verdict));
        out += "\n";
        if (r.verdict != Verdict::correct && !r.summary.empty()) out += "  " + r.summary + "\n";
        for (const auto& p : r.triggered_pitfalls) out += "  hint: " + p + "\n";
        return out;
    }

    static std::string help() {
        return "Type a pipeline such as `data |> filter(red == 3)` or a single verb like `arrange(red)`.\n"
               "A line ending in |> or with open parentheses continues on the next line.\n"
               "  :show            show the current data\n"
               "  :undo            undo the last pipeline\n"
               "  :reset           go back to the starting data\n"
               "  :load PATH       load a CSV or JSON data set\n"
               "  :save PATH       save the current data (.json or .csv)\n"
               "  :mode ascii|table\n"
               "  :exercises       list exercises\n"
               "  :check ID [ANSWER]  grade the last pipeline (or ANSWER) against an exercise\n"
               "  :quit\n";
    }

    CubeFrame initial_;
    CubeFrame current_;
    RenderOptions options_;
    std::vector<Exercise> bank_;
    std::vector<CubeFrame> history_;
    std::string pending_;
    std::string last_source_;
    bool done_ = false;
};

}  // namespace cubes
