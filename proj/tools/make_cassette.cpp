// Records a replay cassette for the remote scorer by answering every step prompt with the
// oracle's scores. Used to refresh the files under data/cassettes.
//   make_cassette <map> <sx,sy> <gx,gy> <instruction> <out.jsonl> [step|fullpath]

#include <cstdio>
#include <fstream>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "gridllm/grounded.hpp"
#include "gridllm/scorers.hpp"

using namespace gridllm;

namespace {

GridPose parse_pose(const std::string& s) {
    const auto comma = s.find(',');
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

std::string chat_body(const std::string& content) {
    return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

class RecordingOracle final : public TaskScorer {
public:
    explicit RecordingOracle(std::ofstream& out) : out_(out) {}
    std::array<double, 4> score(const TaskScorerQuery& q) override {
        const auto scores = oracle_score(q);
        const auto prompt = serialize_step_prompt(*q.grid, q.state, *q.instruction, q.candidates);
        const auto body = build_chat_request({}, {{"system", prompt.system_text}, {"user", prompt.user_text}});
        const std::string reply = fmt::format("Moving towards the goal.\n{}", format_scores(scores));
        out_ << nlohmann::json{{"request_hash", request_hash(body)}, {"status", 200}, {"response_body", chat_body(reply)}}
                    .dump()
             << '\n';
        return scores;
    }
    std::string name() const override { return "recording-oracle"; }

private:
    std::ofstream& out_;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 6) {
        std::fprintf(stderr, "usage: make_cassette <map> <sx,sy> <gx,gy> <instruction> <out.jsonl> [step|fullpath]\n");
        return 1;
    }
    const auto grid = load_map_file(argv[1]);
    const GridPose start = parse_pose(argv[2]);
    const Instruction instr{argv[4], parse_pose(argv[3])};
    std::ofstream out(argv[5], std::ios::binary | std::ios::trunc);
    const std::string mode = argc > 6 ? argv[6] : "step";
    if (mode == "fullpath") {
        const auto prompt = serialize_fullpath_prompt(grid, start, instr);
        const auto body = build_chat_request({}, {{"system", prompt.system_text}, {"user", prompt.user_text}});
        OraclePathSource oracle;
        out << nlohmann::json{{"request_hash", request_hash(body)},
                              {"status", 200},
                              {"response_body", chat_body(oracle.propose(grid, start, instr))}}
                   .dump()
            << '\n';
        return 0;
    }
    RecordingOracle scorer(out);
    const auto result = plan(scorer, grid, start, instr);
    return result.ok() ? 0 : 2;
}
