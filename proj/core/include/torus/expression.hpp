#pragma once

#include <memory>
#include <string>

#include "torus/symbol_table.hpp"

namespace torus {

// Mini-grammar for scenario files: variables x1..xn, xi1..xin, t; the
// imaginary unit i; functions exp, cos, sin; ang(xi) = (1+|xi|^2)^{1/2};
// arithmetic + - * / and ^ with integer exponents.
class Expression {
public:
    static Expression parse(const std::string& source);

    cplx eval(const std::vector<double>& x, const std::vector<double>& xi,
              double t = 0.0) const;

    bool depends_on_x() const;
    bool depends_on_xi() const;
    bool depends_on_t() const;
    const std::string& source() const { return source_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
};

// Tabulation helpers over a configured box/grid.
SymbolTable symbol_from_expression(const Expression& e, const FrequencyBox& box,
                                   int grid_size, SymbolOrder order,
                                   double t = 0.0, bool check_smoothness = true);
LatticeFunction lattice_from_expression(const Expression& e, int n, long bound,
                                        double t = 0.0);
GridFunction grid_function_from_expression(const Expression& e,
                                           const FrequencyBox& box, int grid_size,
                                           double t = 0.0);

}  // namespace torus
