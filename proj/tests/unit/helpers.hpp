#pragma once

#include <string>
#include <vector>

#include "hacomp/domain.hpp"

namespace testing_helpers {

struct Triple {
    double h;
    double ai;
    double team;
};

inline hacomp::ParticipantProfile profile(const std::vector<Triple>& rows,
                                          const std::string& pid = "p1",
                                          const std::string& cid = "c") {
    std::vector<hacomp::InstanceLosses> inst;
    int k = 0;
    for (const auto& r : rows) inst.push_back({"i" + std::to_string(++k), r.h, r.ai, r.team});
    return hacomp::ParticipantProfile(pid, cid, std::move(inst));
}

inline hacomp::DecisionRecord real_record(const std::string& pid, const std::string& cid,
                                          const std::string& iid, double truth, double h,
                                          double ai, double team) {
    return {pid, cid, iid, truth, h, ai, team};
}

inline hacomp::DecisionRecord label_record(const std::string& pid, const std::string& cid,
                                           const std::string& iid, const std::string& truth,
                                           const std::string& h, const std::string& ai,
                                           const std::string& team) {
    return {pid, cid, iid, truth, h, ai, team};
}

}  // namespace testing_helpers
