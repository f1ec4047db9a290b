#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace emitcorr::verify {

struct CheckLine {
    std::string name;
    std::string expected;
    std::string got;
    std::string tolerance;
    bool passed = false;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::vector<CheckLine> checks;
    std::string error;  // set when the criterion threw
    double seconds = 0.0;

    bool passed() const;
};

struct Criterion {
    int id;
    std::string name;
    std::function<void(CriterionResult&, unsigned threads)> run;
};

/// The acceptance criteria in order.
const std::vector<Criterion>& acceptance_criteria();

/// True if `filter` is empty, equals the id ("3", "c03") or is a substring
/// of the name.
bool matches(const Criterion& c, std::string_view filter);

/// Runs every matching criterion, printing each check and one PASS/FAIL line
/// per criterion to `out`.
std::vector<CriterionResult> run(std::string_view filter, unsigned threads, std::ostream& out);

} // namespace emitcorr::verify
