// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "bellclone/verify.h"

using namespace bellclone;
using Clock = std::chrono::steady_clock;

namespace {

const std::map<int, double> kTimeLimits = {{1, 1.0}, {6, 10.0}};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

int main() {
    std::map<int, std::vector<const Claim *>> by_criterion;
    for (const auto &claim : claim_suite()) {
        by_criterion[claim.criterion].push_back(&claim);
    }

    bool all_ok = true;
    for (int criterion = 1; criterion <= 10; criterion++) {
        auto start = Clock::now();
        bool ok = by_criterion.count(criterion) > 0;
        std::string detail;
        for (const Claim *claim : by_criterion[criterion]) {
            ClaimRecord record;
            try {
                record = claim->run();
            } catch (const std::exception &e) {
                record.id = claim->id;
                record.detail = std::string("threw: ") + e.what();
            }
            ok = ok && record.passed;
            detail += " " + claim->id + "=" + (record.passed ? "ok" : "failed(" + record.detail + ")");
        }
        double elapsed = seconds_since(start);
        auto limit = kTimeLimits.find(criterion);
        if (limit != kTimeLimits.end() && elapsed >= limit->second) {
            ok = false;
            detail += " too slow";
        }
        all_ok = all_ok && ok;
        std::printf("criterion %2d %s (%.3fs)%s\n", criterion, ok ? "PASS" : "FAIL", elapsed, detail.c_str());
    }

    auto start = Clock::now();
    int status = std::system(BELLCLONE_BINARY " verify-all > /dev/null");
    double elapsed = seconds_since(start);
    bool ok = WIFEXITED(status) && WEXITSTATUS(status) == 0 && elapsed < 60.0;
    all_ok = all_ok && ok;
    std::printf("criterion 11 %s (%.3fs) verify-all exit=%d\n", ok ? "PASS" : "FAIL", elapsed,
                WIFEXITED(status) ? WEXITSTATUS(status) : -1);

    std::cout << (all_ok ? "ALL PASS" : "SOME FAILED") << std::endl;
    return all_ok ? 0 : 1;
}
