#include "hacomp/example.hpp"

#include <string>

namespace hacomp {

std::vector<DecisionRecord> worked_example_records() {
    struct Block {
        int count;
        const char* human;
        const char* ai;
        const char* team;
    };
    // Correct label is "a".
    const Block blocks[] = {
        {3, "a", "b", "a"},   // AI wrong, human right, team takes the human answer
        {5, "a", "b", "b"},   // AI wrong, human right, team stays with the AI
        {3, "b", "c", "a"},   // both wrong, team finds the answer together
        {2, "b", "c", "c"},   // both wrong, team wrong
        {2, "b", "a", "b"},   // AI right, human wrong, team follows the human
        {8, "b", "a", "a"},   // AI right, human wrong, team right
        {2, "a", "a", "a"},   // both right
    };
    std::vector<DecisionRecord> out;
    int k = 0;
    for (const auto& b : blocks) {
        for (int i = 0; i < b.count; ++i) {
            ++k;
            out.push_back({"p1", "illustration", "i" + std::to_string(k), std::string("a"),
                           std::string(b.human), std::string(b.ai), std::string(b.team)});
        }
    }
    return out;
}

ParticipantProfile worked_example_profile() {
    const auto records = worked_example_records();
    return std::move(build_profiles(records, LossKind::zero_one).profiles.front());
}

}  // namespace hacomp
