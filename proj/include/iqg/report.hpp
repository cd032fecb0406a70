// Suite reports: every verification suite collects all failures (no
// fail-fast) and emits the same JSON shape.
#pragma once

#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace iqg {

struct Range {
    long lo = 0, hi = -1;
    bool empty() const { return hi < lo; }
    long size() const { return empty() ? 0 : hi - lo + 1; }
};

struct Failure {
    std::string identity;
    std::string params;
    std::string lhs;
    std::string rhs;
};

struct Report {
    std::string suite;
    std::string grid;
    long checked = 0;
    std::map<std::string, long> identity_counts;  // per-identity check totals
    std::vector<Failure> failures;
    std::vector<std::string> notes;  // observations that never gate
    long elapsed_ms = 0;

    bool ok() const { return failures.empty(); }
    std::string to_json_text() const;
    void print_text(std::ostream& os) const;
};

// helper the suites use to record checks; witnesses stay in insertion order,
// which is the lexicographic parameter order of the enclosing loops
class Checker {
public:
    explicit Checker(Report& r) : r_(r) {}
    void count() { ++r_.checked; }
    void fail(std::string identity, std::string params, std::string lhs,
              std::string rhs) {
        r_.failures.push_back(
            {std::move(identity), std::move(params), std::move(lhs), std::move(rhs)});
    }
    void check(bool ok, const std::string& identity, const std::string& params,
               const std::function<std::string()>& lhs,
               const std::function<std::string()>& rhs) {
        count();
        r_.identity_counts[identity] += 1;
        if (!ok) fail(identity, params, lhs(), rhs());
    }

private:
    Report& r_;
};

// run fn(i) for i in [0, n) on up to `jobs` threads; fn must be pure apart
// from its per-index slot
void parallel_for(long n, int jobs, const std::function<void(long)>& fn);

class Stopwatch {
public:
    Stopwatch();
    long ms() const;

private:
    long long start_;
};

}  // namespace iqg
