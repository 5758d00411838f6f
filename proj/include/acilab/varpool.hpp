#pragma once
// Interned, ordered variable table shared by all polynomials of one analysis.
//
// A variable may carry a square-reduction rule x^2 -> factor * carrier, where
// factor is rational and carrier is another (or no) square-reduced variable;
// monomials are normalized so x only ever appears to power 0 or 1.  This is
// how algebraic constants enter the otherwise purely polynomial ring:
//   i   with i^2   = -1       (complex balances),
//   eps with eps^2 = +1       (branch symbols kept symbolic),
//   r2  with r2^2  =  2       (sqrt(2)),
//   kap with kap^2 = (1/2)r2  (2^(-1/4), the quartic-oscillator rescaling).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "acilab/rational.hpp"

namespace acilab {

using VarId = std::uint32_t;

struct SquareRule {
    Q factor;
    std::optional<VarId> carrier;  // v^2 = factor * carrier, or just factor
};

class VarPool {
  public:
    VarId intern(const std::string& name) {
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        VarId id = static_cast<VarId>(names_.size());
        names_.push_back(name);
        squares_.emplace_back();
        index_.emplace(name, id);
        return id;
    }

    std::optional<VarId> lookup(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& name(VarId id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }

    void set_square(VarId id, const Q& value) { squares_.at(id) = SquareRule{value, {}}; }
    void set_square(VarId id, const Q& factor, VarId carrier) {
        squares_.at(id) = SquareRule{factor, carrier};
    }
    const std::optional<SquareRule>& square(VarId id) const { return squares_.at(id); }

  private:
    std::vector<std::string> names_;
    std::vector<std::optional<SquareRule>> squares_;
    std::unordered_map<std::string, VarId> index_;
};

}  // namespace acilab
