// Cartan data (symmetrizable generalized Cartan matrix, symmetrizers,
// diagram involution) for the quasi-split setting: the black part is empty,
// so admissibility reduces to the structural axioms checked here.
#pragma once

#include <memory>
#include <string>
#include <vector>

namespace iqg {

struct CartanDatum {
    std::vector<std::string> names;
    std::vector<std::vector<int>> cartan;  // a_ij
    std::vector<int> eps;                  // symmetrizers, eps_i >= 1
    std::vector<int> tau;                  // involution as an image list (0-based)
    std::vector<int> black;                // declared black nodes; must be empty

    int rank() const { return static_cast<int>(names.size()); }
    int a(int i, int j) const { return cartan[i][j]; }
    int eps_of(int i) const { return eps[i]; }
    int tau_of(int i) const { return tau[i]; }

    // content key used by evaluation caches
    const std::string& fingerprint() const;

    std::string to_json_text() const;
    static CartanDatum from_json_text(const std::string& text);
    static CartanDatum load_file(const std::string& path);
    void save_file(const std::string& path) const;

    // resolve a node reference: exact name match first, then 1-based position
    int resolve_node(const std::string& ref) const;

private:
    mutable std::string fingerprint_;
};

using DatumPtr = std::shared_ptr<const CartanDatum>;

// every violated structural condition, with offending indices; empty = valid
std::vector<std::string> validate_datum(const CartanDatum& d);

enum class NodeClass { split, swapped };
NodeClass node_class(const CartanDatum& d, int j);

// rank-2 datum with the given off-diagonal entries and minimal symmetrizers
DatumPtr make_rank2(int a12, int a21);
// A3 chain with the involution swapping the two end nodes
DatumPtr make_a3_swapped();
DatumPtr make_a1xa1();

}  // namespace iqg
