#include "iqg/report.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "json.hpp"

namespace iqg {

std::string Report::to_json_text() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["grid"] = grid;
    j["checked"] = checked;
    j["failures"] = nlohmann::json::array();
    for (const auto& f : failures)
        j["failures"].push_back({{"identity", f.identity},
                                 {"params", f.params},
                                 {"lhs", f.lhs},
                                 {"rhs", f.rhs}});
    if (!identity_counts.empty()) {
        j["identities"] = nlohmann::json::object();
        for (const auto& [name, count] : identity_counts)
            j["identities"][name] = count;
    }
    if (!notes.empty()) j["notes"] = notes;
    j["elapsed_ms"] = elapsed_ms;
    return j.dump(2);
}

void Report::print_text(std::ostream& os) const {
    os << "suite " << suite << ": " << checked << " checks, " << failures.size()
       << " failures (" << elapsed_ms << " ms)\n";
    if (!grid.empty()) os << "  grid: " << grid << "\n";
    if (!identity_counts.empty()) {
        os << "  identities:";
        for (const auto& [name, count] : identity_counts)
            os << " " << name << "=" << count;
        os << "\n";
    }
    for (const auto& f : failures) {
        os << "  FAIL " << f.identity << " at " << f.params << "\n";
        os << "    lhs = " << f.lhs << "\n";
        os << "    rhs = " << f.rhs << "\n";
    }
    for (const auto& n : notes) os << "  note: " << n << "\n";
}

void parallel_for(long n, int jobs, const std::function<void(long)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    auto worker = [&] {
        while (true) {
            long i = next.fetch_add(1);
            if (i >= n) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int k = std::min<long>(jobs, n);
    pool.reserve(k);
    for (int t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

Stopwatch::Stopwatch()
    : start_(std::chrono::duration_cast<std::chrono::milliseconds>(
                 std::chrono::steady_clock::now().time_since_epoch())
                 .count()) {}

long Stopwatch::ms() const {
    auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now().time_since_epoch())
                   .count();
    return static_cast<long>(now - start_);
}

}  // namespace iqg
