#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace bellclone {

/// Outcome of one verified claim. `measured` is the figure compared against
/// `tolerance`; `detail` says which way the comparison goes.
struct ClaimRecord {
    std::string id;
    std::string anchor;
    bool passed = false;
    double measured = 0;
    double tolerance = 0;
    std::string detail;
};

void to_json(nlohmann::json &j, const ClaimRecord &record);

struct Claim {
    std::string id;
    /// Acceptance criterion (1..10) the claim belongs to.
    int criterion;
    std::function<ClaimRecord()> run;
};

/// Every claim, sorted by id.
const std::vector<Claim> &claim_suite();

/// Runs the whole suite. Records come back sorted by id.
std::vector<ClaimRecord> run_claims();

/// {"passed": bool, "claims": [...], "failing": [ids]}.
nlohmann::json claims_report(const std::vector<ClaimRecord> &records);

}  // namespace bellclone
