#include "iqg/cartan.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace iqg {

const std::string& CartanDatum::fingerprint() const {
    if (fingerprint_.empty()) {
        std::ostringstream os;
        for (const auto& n : names) os << n << ',';
        os << '|';
        for (const auto& row : cartan)
            for (int v : row) os << v << ',';
        os << '|';
        for (int v : eps) os << v << ',';
        os << '|';
        for (int v : tau) os << v << ',';
        fingerprint_ = os.str();
    }
    return fingerprint_;
}

std::string CartanDatum::to_json_text() const {
    nlohmann::json j;
    j["nodes"] = names;
    j["cartan"] = cartan;
    j["eps"] = eps;
    j["tau"] = tau;
    if (!black.empty()) j["black"] = black;
    return j.dump(2);
}

CartanDatum CartanDatum::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CartanDatum d;
    d.names = j.at("nodes").get<std::vector<std::string>>();
    d.cartan = j.at("cartan").get<std::vector<std::vector<int>>>();
    d.eps = j.at("eps").get<std::vector<int>>();
    d.tau = j.at("tau").get<std::vector<int>>();
    if (j.contains("black")) d.black = j.at("black").get<std::vector<int>>();
    return d;
}

CartanDatum CartanDatum::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open datum file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

void CartanDatum::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write datum file: " + path);
    out << to_json_text() << "\n";
}

int CartanDatum::resolve_node(const std::string& ref) const {
    for (int i = 0; i < rank(); ++i)
        if (names[i] == ref) return i;
    try {
        size_t used = 0;
        int pos = std::stoi(ref, &used);
        if (used == ref.size() && pos >= 1 && pos <= rank()) return pos - 1;
    } catch (...) {
    }
    throw std::runtime_error("unknown node reference: " + ref);
}

std::vector<std::string> validate_datum(const CartanDatum& d) {
    std::vector<std::string> out;
    int n = d.rank();
    auto idx = [&](int i) {
        return i < n ? d.names[i] : std::to_string(i);
    };
    if (static_cast<int>(d.cartan.size()) != n)
        out.push_back("cartan matrix has " + std::to_string(d.cartan.size()) +
                      " rows, expected " + std::to_string(n));
    for (const auto& row : d.cartan)
        if (static_cast<int>(row.size()) != n) {
            out.push_back("cartan matrix is not square");
            break;
        }
    if (static_cast<int>(d.eps.size()) != n) out.push_back("eps has wrong length");
    if (static_cast<int>(d.tau.size()) != n) out.push_back("tau has wrong length");
    if (!out.empty()) return out;  // shape is broken, skip value checks

    if (!d.black.empty())
        out.push_back("black part is not empty: only quasi-split data (I_black = {}) "
                      "are representable here");
    for (int i = 0; i < n; ++i) {
        if (d.cartan[i][i] != 2)
            out.push_back("a(" + idx(i) + "," + idx(i) + ") = " +
                          std::to_string(d.cartan[i][i]) + ", expected 2");
        if (d.eps[i] < 1)
            out.push_back("eps(" + idx(i) + ") = " + std::to_string(d.eps[i]) +
                          ", expected >= 1");
        for (int j = 0; j < n; ++j) {
            if (i != j && d.cartan[i][j] > 0)
                out.push_back("a(" + idx(i) + "," + idx(j) + ") > 0");
            if (d.eps[i] * d.cartan[i][j] != d.eps[j] * d.cartan[j][i])
                out.push_back("not symmetrizable by given eps at (" + idx(i) + "," +
                              idx(j) + ")");
        }
    }
    for (int i = 0; i < n; ++i) {
        if (d.tau[i] < 0 || d.tau[i] >= n) {
            out.push_back("tau(" + idx(i) + ") out of range");
            continue;
        }
        if (d.tau[d.tau[i]] != i)
            out.push_back("tau is not an involution at " + idx(i));
        if (d.eps[d.tau[i]] != d.eps[i])
            out.push_back("eps not tau-invariant at " + idx(i));
        for (int j = 0; j < n; ++j)
            if (d.tau[j] >= 0 && d.tau[j] < n &&
                d.cartan[d.tau[i]][d.tau[j]] != d.cartan[i][j])
                out.push_back("cartan not tau-invariant at (" + idx(i) + "," + idx(j) +
                              ")");
    }
    return out;
}

NodeClass node_class(const CartanDatum& d, int j) {
    return d.tau_of(j) == j ? NodeClass::split : NodeClass::swapped;
}

static DatumPtr freeze(CartanDatum d) {
    auto bad = validate_datum(d);
    if (!bad.empty()) throw std::runtime_error("invalid datum: " + bad.front());
    return std::make_shared<const CartanDatum>(std::move(d));
}

DatumPtr make_rank2(int a12, int a21) {
    if ((a12 == 0) != (a21 == 0))
        throw std::runtime_error("make_rank2: a12 and a21 must vanish together");
    CartanDatum d;
    d.names = {"1", "2"};
    d.cartan = {{2, a12}, {a21, 2}};
    if (a12 == 0) {
        d.eps = {1, 1};
    } else {
        int g = std::gcd(-a12, -a21);
        d.eps = {-a21 / g, -a12 / g};
    }
    d.tau = {0, 1};
    return freeze(std::move(d));
}

DatumPtr make_a3_swapped() {
    CartanDatum d;
    d.names = {"1", "2", "3"};
    d.cartan = {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
    d.eps = {1, 1, 1};
    d.tau = {2, 1, 0};
    return freeze(std::move(d));
}

DatumPtr make_a1xa1() { return make_rank2(0, 0); }

}  // namespace iqg
