#pragma once

#include <vector>

#include "hacomp/domain.hpp"

namespace hacomp {

// The 25-instance classification illustration: AI 13 errors, human 15,
// 5 instances neither solves, team 9 errors. Labels are "a" (correct), "b"
// and "c"; participant "p1" in condition "illustration".
std::vector<DecisionRecord> worked_example_records();
ParticipantProfile worked_example_profile();

}  // namespace hacomp
