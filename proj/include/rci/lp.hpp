#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rci/error.hpp"
#include "rci/linalg.hpp"

namespace rci::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultFeasTol = 1e-7;
inline constexpr double kDefaultOptTol = 1e-8;

/// Contiguous range of variable indices.
struct VarBlock {
  int start = 0;
  int size = 0;

  int operator[](int i) const { return start + i; }
  int end() const { return start + size; }

  friend bool operator==(const VarBlock&, const VarBlock&) = default;
};

/// A VarBlock viewed as a rows x cols matrix stored row-major.
struct VarMatrix {
  int start = 0;
  int rows = 0;
  int cols = 0;

  int operator()(int r, int c) const { return start + r * cols + c; }
  VarBlock block() const { return {start, rows * cols}; }
};

struct Term {
  int var = 0;
  double coef = 0.0;

  friend bool operator==(const Term&, const Term&) = default;
};

/// One linear row: sum(terms) (= or <=) rhs. Terms are kept sorted by
/// variable with duplicates merged and zeros dropped.
struct Row {
  std::vector<Term> terms;
  double rhs = 0.0;

  friend bool operator==(const Row&, const Row&) = default;
};

/// Solver-agnostic LP: minimize c'x subject to equality rows, <= rows and
/// variable bounds.
class LpProblem {
 public:
  VarBlock add_variables(const std::string& name, int count, double lower = -kInf,
                         double upper = kInf) {
    if (count < 0) throw Error("add_variables: negative count");
    if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
      throw Error("add_variables: invalid bounds for block '" + name + "'");
    }
    VarBlock block{num_variables(), count};
    lower_.insert(lower_.end(), count, lower);
    upper_.insert(upper_.end(), count, upper);
    objective_.insert(objective_.end(), count, 0.0);
    layout_.emplace_back(name, block);
    return block;
  }

  VarMatrix add_matrix(const std::string& name, int rows, int cols, double lower = -kInf,
                       double upper = kInf) {
    const VarBlock b = add_variables(name, rows * cols, lower, upper);
    return {b.start, rows, cols};
  }

  int add_equality(std::vector<Term> terms, double rhs) {
    equalities_.push_back(make_row(std::move(terms), rhs));
    return static_cast<int>(equalities_.size()) - 1;
  }

  /// sum(terms) <= rhs
  int add_inequality(std::vector<Term> terms, double rhs) {
    inequalities_.push_back(make_row(std::move(terms), rhs));
    return static_cast<int>(inequalities_.size()) - 1;
  }

  void set_objective(int var, double coef) {
    check_var(var);
    if (!std::isfinite(coef)) throw Error("objective coefficient must be finite");
    objective_[var] = coef;
  }

  void add_objective(int var, double coef) { set_objective(var, objective_.at(var) + coef); }

  void set_bounds(int var, double lower, double upper) {
    check_var(var);
    if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
      throw Error("set_bounds: invalid bounds");
    }
    lower_[var] = lower;
    upper_[var] = upper;
  }

  int num_variables() const { return static_cast<int>(lower_.size()); }
  int num_equalities() const { return static_cast<int>(equalities_.size()); }
  int num_inequalities() const { return static_cast<int>(inequalities_.size()); }

  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<Row>& equalities() const { return equalities_; }
  const std::vector<Row>& inequalities() const { return inequalities_; }
  const std::vector<std::pair<std::string, VarBlock>>& layout() const { return layout_; }

  /// Looks up a named block from the layout map.
  VarBlock block(const std::string& name) const {
    for (const auto& [n, b] : layout_) {
      if (n == name) return b;
    }
    throw Error("no variable block named '" + name + "'");
  }

  void validate() const {
    for (int v = 0; v < num_variables(); ++v) {
      if (std::isnan(lower_[v]) || std::isnan(upper_[v]) || lower_[v] > upper_[v]) {
        throw Error("variable " + std::to_string(v) + " has invalid bounds");
      }
      if (!std::isfinite(objective_[v])) throw Error("non-finite objective coefficient");
    }
    for (const auto* rows : {&equalities_, &inequalities_}) {
      for (const auto& row : *rows) {
        if (!std::isfinite(row.rhs)) throw Error("non-finite right-hand side");
        for (const auto& t : row.terms) {
          check_var(t.var);
          if (!std::isfinite(t.coef)) throw Error("non-finite coefficient");
        }
      }
    }
  }

  friend bool operator==(const LpProblem&, const LpProblem&) = default;

 private:
  void check_var(int var) const {
    if (var < 0 || var >= num_variables()) {
      throw Error("variable index " + std::to_string(var) + " out of range");
    }
  }

  Row make_row(std::vector<Term> terms, double rhs) const {
    if (!std::isfinite(rhs)) throw Error("right-hand side must be finite");
    for (const auto& t : terms) {
      check_var(t.var);
      if (!std::isfinite(t.coef)) throw Error("coefficient must be finite");
    }
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term& a, const Term& b) { return a.var < b.var; });
    Row row;
    row.rhs = rhs;
    for (const auto& t : terms) {
      if (!row.terms.empty() && row.terms.back().var == t.var) {
        row.terms.back().coef += t.coef;
      } else {
        row.terms.push_back(t);
      }
    }
    std::erase_if(row.terms, [](const Term& t) { return t.coef == 0.0; });
    return row;
  }

  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> objective_;
  std::vector<Row> equalities_;
  std::vector<Row> inequalities_;
  std::vector<std::pair<std::string, VarBlock>> layout_;
};

enum class Status { Optimal, Infeasible, Unbounded, NumericalFailure };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
    case Status::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

struct LpSolution {
  Status status = Status::NumericalFailure;
  Vector primal;  // empty unless Optimal
  double objective = 0.0;
  int iterations = 0;

  bool optimal() const { return status == Status::Optimal; }

  double value(int var) const { return primal(var); }

  Matrix matrix(const VarMatrix& vm) const {
    Matrix out(vm.rows, vm.cols);
    for (int r = 0; r < vm.rows; ++r) {
      for (int c = 0; c < vm.cols; ++c) out(r, c) = primal(vm(r, c));
    }
    return out;
  }
};

/// Appends s >= 0 per entry of `block` with -s <= x <= s and adds sum(s)
/// (times `weight`) to the objective. Returns the block of s.
inline VarBlock add_l1_objective(LpProblem& p, VarBlock block, double weight = 1.0) {
  if (block.start < 0 || block.end() > p.num_variables()) {
    throw Error("add_l1_objective: block outside variable range");
  }
  const VarBlock s = p.add_variables("l1_aux", block.size, 0.0, kInf);
  for (int i = 0; i < block.size; ++i) {
    p.add_inequality({{block[i], 1.0}, {s[i], -1.0}}, 0.0);
    p.add_inequality({{block[i], -1.0}, {s[i], -1.0}}, 0.0);
    p.add_objective(s[i], weight);
  }
  return s;
}

/// Tiny strictly ordered linear weights on `block`. Breaks ties among
/// alternative optima so the primal point is reproducible; off by default
/// everywhere it is offered.
inline void add_lexicographic_regularizer(LpProblem& p, VarBlock block, double weight = 1e-9) {
  for (int i = 0; i < block.size; ++i) {
    p.add_objective(block[i], weight * (1.0 + static_cast<double>(i) / std::max(1, block.size)));
  }
}

// ---------------------------------------------------------------------------
// MPS debug dump. Section layout follows fixed MPS; numbers are written with
// 17 significant digits so that a dump re-reads into an identical problem.

namespace detail {

inline std::string mps_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace detail

inline void write_mps(const LpProblem& p, std::ostream& os, const std::string& name = "RCI") {
  using detail::mps_number;
  os << "NAME          " << name << "\n";
  for (const auto& [n, b] : p.layout()) {
    os << "* LAYOUT " << n << " " << b.start << " " << b.size << "\n";
  }
  os << "ROWS\n N  OBJ\n";
  for (int r = 0; r < p.num_equalities(); ++r) os << " E  E" << r << "\n";
  for (int r = 0; r < p.num_inequalities(); ++r) os << " L  L" << r << "\n";

  // Column-major view of the row data.
  std::vector<std::vector<std::pair<std::string, double>>> cols(p.num_variables());
  for (int v = 0; v < p.num_variables(); ++v) {
    if (p.objective()[v] != 0.0) cols[v].emplace_back("OBJ", p.objective()[v]);
  }
  for (int r = 0; r < p.num_equalities(); ++r) {
    for (const auto& t : p.equalities()[r].terms) cols[t.var].emplace_back("E" + std::to_string(r), t.coef);
  }
  for (int r = 0; r < p.num_inequalities(); ++r) {
    for (const auto& t : p.inequalities()[r].terms) cols[t.var].emplace_back("L" + std::to_string(r), t.coef);
  }
  os << "COLUMNS\n";
  for (int v = 0; v < p.num_variables(); ++v) {
    if (cols[v].empty()) {
      // Keep the column declared so the variable count survives a re-read.
      os << "    X" << v << "  OBJ  0\n";
    }
    for (const auto& [row, coef] : cols[v]) {
      os << "    X" << v << "  " << row << "  " << mps_number(coef) << "\n";
    }
  }
  os << "RHS\n";
  for (int r = 0; r < p.num_equalities(); ++r) {
    if (p.equalities()[r].rhs != 0.0) os << "    RHS  E" << r << "  " << mps_number(p.equalities()[r].rhs) << "\n";
  }
  for (int r = 0; r < p.num_inequalities(); ++r) {
    if (p.inequalities()[r].rhs != 0.0) os << "    RHS  L" << r << "  " << mps_number(p.inequalities()[r].rhs) << "\n";
  }
  os << "BOUNDS\n";
  for (int v = 0; v < p.num_variables(); ++v) {
    const double lo = p.lower()[v];
    const double up = p.upper()[v];
    const std::string x = "X" + std::to_string(v);
    if (lo == up) {
      os << " FX BND  " << x << "  " << mps_number(lo) << "\n";
    } else if (lo == -kInf && up == kInf) {
      os << " FR BND  " << x << "\n";
    } else {
      if (lo == -kInf) {
        os << " MI BND  " << x << "\n";
      } else if (lo != 0.0) {
        os << " LO BND  " << x << "  " << mps_number(lo) << "\n";
      }
      if (up != kInf) os << " UP BND  " << x << "  " << mps_number(up) << "\n";
    }
  }
  os << "ENDATA\n";
}

/// Reads the dialect produced by write_mps.
inline LpProblem read_mps(std::istream& is) {
  enum class Section { None, Rows, Columns, Rhs, Bounds };
  Section section = Section::None;
  std::vector<std::pair<std::string, VarBlock>> layout;
  std::map<std::string, std::pair<char, int>> rows;  // name -> (type, index)
  int n_eq = 0;
  int n_le = 0;
  std::vector<std::vector<Term>> eq_terms, le_terms;
  std::vector<double> eq_rhs, le_rhs;
  std::map<std::string, int> col_index;
  std::vector<double> obj, lo, up;

  auto col_of = [&](const std::string& name) {
    auto it = col_index.find(name);
    if (it != col_index.end()) return it->second;
    const int idx = static_cast<int>(obj.size());
    col_index.emplace(name, idx);
    obj.push_back(0.0);
    lo.push_back(0.0);
    up.push_back(kInf);
    return idx;
  };

  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '*') {
      std::string star, tag, name;
      VarBlock b;
      ls >> star >> tag;
      if (tag == "LAYOUT" && (ls >> name >> b.start >> b.size)) layout.emplace_back(name, b);
      continue;
    }
    if (line[0] != ' ') {
      std::string head;
      ls >> head;
      if (head == "ROWS") section = Section::Rows;
      else if (head == "COLUMNS") section = Section::Columns;
      else if (head == "RHS") section = Section::Rhs;
      else if (head == "BOUNDS") section = Section::Bounds;
      else if (head == "ENDATA") break;
      continue;
    }
    switch (section) {
      case Section::Rows: {
        std::string type, name;
        ls >> type >> name;
        if (type == "E") {
          rows[name] = {'E', n_eq++};
          eq_terms.emplace_back();
          eq_rhs.push_back(0.0);
        } else if (type == "L") {
          rows[name] = {'L', n_le++};
          le_terms.emplace_back();
          le_rhs.push_back(0.0);
        } else if (type == "N") {
          rows[name] = {'N', 0};
        } else {
          throw Error("read_mps: unsupported row type '" + type + "'");
        }
        break;
      }
      case Section::Columns: {
        std::string col, row, val;
        ls >> col;
        const int c = col_of(col);
        while (ls >> row >> val) {
          const auto it = rows.find(row);
          if (it == rows.end()) throw Error("read_mps: unknown row '" + row + "'");
          const double v = std::stod(val);
          if (it->second.first == 'N') obj[c] = v;
          else if (it->second.first == 'E') eq_terms[it->second.second].push_back({c, v});
          else le_terms[it->second.second].push_back({c, v});
        }
        break;
      }
      case Section::Rhs: {
        std::string set, row, val;
        ls >> set;
        while (ls >> row >> val) {
          const auto it = rows.find(row);
          if (it == rows.end()) throw Error("read_mps: unknown row '" + row + "'");
          if (it->second.first == 'E') eq_rhs[it->second.second] = std::stod(val);
          else if (it->second.first == 'L') le_rhs[it->second.second] = std::stod(val);
        }
        break;
      }
      case Section::Bounds: {
        std::string type, set, col, val;
        ls >> type >> set >> col;
        const int c = col_of(col);
        if (type == "FR") { lo[c] = -kInf; up[c] = kInf; }
        else if (type == "MI") lo[c] = -kInf;
        else if (type == "PL") up[c] = kInf;
        else {
          ls >> val;
          const double v = std::stod(val);
          if (type == "LO") lo[c] = v;
          else if (type == "UP") up[c] = v;
          else if (type == "FX") { lo[c] = v; up[c] = v; }
          else throw Error("read_mps: unsupported bound type '" + type + "'");
        }
        break;
      }
      case Section::None:
        throw Error("read_mps: data outside of a section");
    }
  }

  // Columns are named X<index>; restore that ordering.
  std::vector<int> order(obj.size());
  for (const auto& [name, idx] : col_index) {
    if (name.size() < 2 || name[0] != 'X') throw Error("read_mps: unexpected column name " + name);
    const int v = std::stoi(name.substr(1));
    if (v < 0 || v >= static_cast<int>(order.size())) throw Error("read_mps: column index gap");
    order[v] = idx;
  }
  std::vector<int> inverse(order.size());
  for (std::size_t v = 0; v < order.size(); ++v) inverse[order[v]] = static_cast<int>(v);

  LpProblem p;
  std::size_t next_block = 0;
  int v = 0;
  const int total = static_cast<int>(order.size());
  while (v < total) {
    if (next_block < layout.size() && layout[next_block].second.start == v) {
      const auto& [name, b] = layout[next_block++];
      p.add_variables(name, b.size);
      v += b.size;
    } else {
      p.add_variables("x", 1);
      ++v;
    }
  }
  for (int i = 0; i < total; ++i) {
    const int c = order[i];
    p.set_bounds(i, lo[c], up[c]);
    p.set_objective(i, obj[c]);
  }
  auto remap = [&](std::vector<Term> terms) {
    for (auto& t : terms) t.var = inverse[t.var];
    return terms;
  };
  for (int r = 0; r < n_eq; ++r) p.add_equality(remap(eq_terms[r]), eq_rhs[r]);
  for (int r = 0; r < n_le; ++r) p.add_inequality(remap(le_terms[r]), le_rhs[r]);
  return p;
}

}  // namespace rci::lp
