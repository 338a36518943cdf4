#include "properpairs/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

namespace properpairs {

namespace {

enum class Cond {
  P,        // proper
  B,        // blank (never proper)
  AbsNe,    // |a| != |b|
  AbsGt,    // |a| > |b|
  AbsLt,    // |a| < |b|
  AbsGe1,   // |x| >= 1 on the free parameter
  AbsGt1,   // |x| > 1
  AbsNe1,   // |x| != 1
  AbsNe3,   // |x| != 3
  AbsGt3,   // |x| > 3
  AbsLt3,   // |x| < 3
  Ne0,      // x != 0
  Range,    // -1 <= b < 1 (signed column parameter)
  AbsLt1,   // |b| < 1 (column parameter)
};

struct Axis {
  std::string label;
  Family family = Family::Trivial;
  int index = 0;
  enum class P { None, Free, FreeNonZero, Zero } param = P::None;
  Ambient ambient = Ambient::GL2xR2;
};

struct TableDef {
  std::string name;
  std::string caption;
  std::vector<Axis> rows, cols;
  std::vector<std::vector<Cond>> cells;
};

bool condUsesBoth(Cond c) { return c == Cond::AbsNe || c == Cond::AbsGt || c == Cond::AbsLt; }

bool evalCond(Cond c, double a, double b, bool aFree, bool bFree) {
  const double x = bFree && !aFree ? b : a;
  switch (c) {
    case Cond::P: return true;
    case Cond::B: return false;
    case Cond::AbsNe: return std::abs(std::abs(a) - std::abs(b)) > 1e-12;
    case Cond::AbsGt: return std::abs(a) > std::abs(b);
    case Cond::AbsLt: return std::abs(a) < std::abs(b);
    case Cond::AbsGe1: return std::abs(x) >= 1.0;
    case Cond::AbsGt1: return std::abs(x) > 1.0;
    case Cond::AbsNe1: return std::abs(std::abs(x) - 1.0) > 1e-12;
    case Cond::AbsNe3: return std::abs(std::abs(x) - 3.0) > 1e-12;
    case Cond::AbsGt3: return std::abs(x) > 3.0;
    case Cond::AbsLt3: return std::abs(x) < 3.0;
    case Cond::Ne0: return std::abs(x) > 1e-12;
    case Cond::Range: return b >= -1.0 && b < 1.0;
    case Cond::AbsLt1: return std::abs(b) < 1.0;
  }
  return false;
}

std::string condStr(Cond c) {
  switch (c) {
    case Cond::P: return "proper";
    case Cond::B: return "-";
    case Cond::AbsNe: return "|a|!=|b|";
    case Cond::AbsGt: return "|a|>|b|";
    case Cond::AbsLt: return "|a|<|b|";
    case Cond::AbsGe1: return "|a|>=1";
    case Cond::AbsGt1: return "|a|>1";
    case Cond::AbsNe1: return "|.|!=1";
    case Cond::AbsNe3: return "|.|!=3";
    case Cond::AbsGt3: return "|.|>3";
    case Cond::AbsLt3: return "|.|<3";
    case Cond::Ne0: return "a!=0";
    case Cond::Range: return "-1<=b<1";
    case Cond::AbsLt1: return "|b|<1";
  }
  return "?";
}

Axis fixed(std::string label, Family f) { return Axis{std::move(label), f, 0, Axis::P::None}; }
Axis idx(std::string label, Family f, int i) { return Axis{std::move(label), f, i, Axis::P::None}; }
Axis par(std::string label, Family f, int i) { return Axis{std::move(label), f, i, Axis::P::Free}; }
Axis parNZ(std::string label, Family f, int i) {
  return Axis{std::move(label), f, i, Axis::P::FreeNonZero};
}
Axis parZero(std::string label, Family f, int i) {
  return Axis{std::move(label), f, i, Axis::P::Zero};
}
Axis glFree(std::string label, Family f) {
  return Axis{std::move(label), f, 0, Axis::P::Free, Ambient::GL2};
}
Axis glFixed(std::string label, Family f) {
  return Axis{std::move(label), f, 0, Axis::P::None, Ambient::GL2};
}

std::vector<Axis> slAxes() {
  return {fixed("SL2", Family::SL2), fixed("R2", Family::R2), fixed("S", Family::S),
          fixed("L", Family::L),     fixed("M", Family::M),   fixed("N", Family::N)};
}

std::vector<Axis> aAxes(const char* sym) {
  std::string s(sym);
  return {par("L(A(" + s + "),1)", Family::A, 1), idx("L(A(1),2)", Family::A, 2),
          par("L(A(" + s + "),3)", Family::A, 3), idx("L(A(1),4)", Family::A, 4),
          par("L(A(" + s + "),5)", Family::A, 5)};
}

std::vector<Axis> bAxes(const char* sym) {
  std::string s(sym);
  return {par("L(B(" + s + "),1)", Family::B, 1),  idx("L(B(1),2)", Family::B, 2),
          idx("L(B(-3),3)", Family::B, 3),         par("L(B(" + s + "),4)", Family::B, 4),
          idx("L(B(-1),5)", Family::B, 5),         idx("L(B(-3),6)", Family::B, 6),
          par("L(B(" + s + "),7)", Family::B, 7)};
}

std::vector<Axis> zAxes() {
  return {idx("L(Z,1)", Family::Z, 1), idx("L(Z,2)", Family::Z, 2)};
}

std::vector<Axis> uAxes() {
  return {idx("L(U,1)", Family::U, 1), idx("L(U,2)", Family::U, 2), idx("L(U,3)", Family::U, 3)};
}

std::vector<std::vector<Cond>> grid(std::initializer_list<std::initializer_list<Cond>> rows) {
  std::vector<std::vector<Cond>> out;
  for (const auto& r : rows) out.emplace_back(r);
  return out;
}

TableDef buildTable(TableId id) {
  using C = Cond;
  TableDef t;
  switch (id) {
    case TableId::T1:
      t.name = "t1";
      t.caption = "Properness of pairs of connected subgroups of SL2(R)xR2";
      t.rows = slAxes();
      t.cols = slAxes();
      t.cells = grid({{C::B, C::P, C::B, C::B, C::P, C::P},
                      {C::P, C::B, C::B, C::B, C::B, C::P},
                      {C::B, C::B, C::B, C::B, C::B, C::P},
                      {C::B, C::B, C::B, C::B, C::B, C::B},
                      {C::P, C::B, C::B, C::B, C::B, C::B},
                      {C::P, C::P, C::P, C::B, C::B, C::B}});
      break;
    case TableId::T2:
      t.name = "t2";
      t.caption = "Properness of the pairs of connected subgroups of GL2(R)";
      t.rows = {glFixed("Z", Family::Z), glFree("A(a)", Family::A), glFixed("U", Family::U),
                glFree("B(a)", Family::B)};
      t.cols = {glFixed("Z", Family::Z), glFree("A(b)", Family::A), glFixed("U", Family::U),
                glFree("B(b)", Family::B)};
      t.cells = grid({{C::B, C::P, C::P, C::P},
                      {C::P, C::AbsNe, C::P, C::AbsGt},
                      {C::P, C::P, C::B, C::P},
                      {C::P, C::AbsLt, C::P, C::B}});
      break;
    case TableId::T5:
    case TableId::A13:
      t.name = id == TableId::T5 ? "t5" : "a13";
      t.caption = "Properness for diagonal-type rows against triangular-type columns";
      t.rows = aAxes("a");
      t.cols = bAxes("b");
      t.cells = grid({{C::AbsGt, C::AbsGe1, C::AbsNe3, C::AbsGt, C::Ne0, C::AbsNe3, C::AbsGt},
                      {C::P, C::B, C::P, C::Range, C::B, C::P, C::AbsLt1},
                      {C::AbsGt, C::AbsGt1, C::AbsNe3, C::B, C::B, C::B, C::B},
                      {C::P, C::B, C::P, C::B, C::B, C::B, C::B},
                      {C::AbsGt, C::AbsGt1, C::AbsGt3, C::B, C::B, C::B, C::B}});
      break;
    case TableId::A1:
      t.name = "a1";
      t.caption = "Homothety-type rows against the det-one block";
      t.rows = zAxes();
      t.cols = slAxes();
      t.cells = grid({{C::P, C::P, C::P, C::P, C::P, C::P},
                      {C::P, C::B, C::B, C::B, C::B, C::P}});
      break;
    case TableId::A2:
      t.name = "a2";
      t.caption = "Diagonal-type rows against the det-one block";
      t.rows = {parZero("L(A(0),1)", Family::A, 1), parNZ("L(A(a),1),a!=0", Family::A, 1),
                idx("L(A(1),2)", Family::A, 2),     parZero("L(A(0),3)", Family::A, 3),
                parNZ("L(A(a),3),a!=0", Family::A, 3), idx("L(A(1),4)", Family::A, 4),
                parZero("L(A(0),5)", Family::A, 5), parNZ("L(A(a),5),a!=0", Family::A, 5)};
      t.cols = slAxes();
      t.cells = grid({{C::B, C::P, C::B, C::B, C::P, C::P},
                      {C::P, C::P, C::P, C::P, C::P, C::P},
                      {C::P, C::P, C::P, C::P, C::P, C::P},
                      {C::B, C::B, C::B, C::B, C::B, C::P},
                      {C::P, C::B, C::B, C::B, C::B, C::P},
                      {C::P, C::B, C::B, C::B, C::B, C::P},
                      {C::B, C::B, C::B, C::B, C::B, C::B},
                      {C::P, C::B, C::B, C::B, C::B, C::P}});
      break;
    case TableId::A3:
      t.name = "a3";
      t.caption = "Unipotent-homothety rows against the det-one block";
      t.rows = uAxes();
      t.cols = slAxes();
      t.cells = grid({{C::P, C::P, C::P, C::P, C::P, C::P},
                      {C::P, C::B, C::B, C::B, C::B, C::P},
                      {C::P, C::B, C::B, C::B, C::B, C::P}});
      break;
    case TableId::A4:
      t.name = "a4";
      t.caption = "Triangular-type rows against the det-one block";
      t.rows = bAxes("b");
      t.cols = slAxes();
      t.cells = grid({{C::B, C::P, C::B, C::B, C::P, C::P},
                      {C::B, C::P, C::B, C::B, C::P, C::P},
                      {C::P, C::P, C::P, C::P, C::P, C::P},
                      {C::B, C::B, C::B, C::B, C::B, C::B},
                      {C::B, C::B, C::B, C::B, C::B, C::B},
                      {C::P, C::B, C::B, C::B, C::B, C::B},
                      {C::B, C::B, C::B, C::B, C::B, C::B}});
      break;
    case TableId::A5:
      t.name = "a5";
      t.caption = "Homothety-shear rows against the det-one block";
      t.rows = {idx("L(B',1)", Family::Bp, 1)};
      t.cols = slAxes();
      t.cells = grid({{C::B, C::B, C::B, C::B, C::B, C::B}});
      break;
    case TableId::A6:
      t.name = "a6";
      t.caption = "Full-diagonal rows against the det-one block";
      t.rows = {idx("L(D,1)", Family::D, 1)};
      t.cols = slAxes();
      t.cells = grid({{C::B, C::B, C::B, C::B, C::B, C::P}});
      break;
    case TableId::A7:
      t.name = "a7";
      t.caption = "Homothety-type rows against diagonal-type columns";
      t.rows = zAxes();
      t.cols = aAxes("b");
      t.cells = grid({{C::P, C::P, C::P, C::P, C::P},
                      {C::P, C::P, C::B, C::B, C::B}});
      break;
    case TableId::A8:
      t.name = "a8";
      t.caption = "Homothety-type rows against unipotent-homothety columns";
      t.rows = zAxes();
      t.cols = uAxes();
      t.cells = grid({{C::P, C::P, C::P}, {C::P, C::B, C::B}});
      break;
    case TableId::A9:
      t.name = "a9";
      t.caption = "Homothety-type rows against triangular-type columns";
      t.rows = zAxes();
      t.cols = bAxes("b");
      t.cells = grid({{C::P, C::P, C::P, C::P, C::P, C::P, C::P},
                      {C::P, C::P, C::P, C::B, C::B, C::B, C::B}});
      break;
    case TableId::A10:
      t.name = "a10";
      t.caption = "Diagonal-type rows against unipotent-homothety columns";
      t.rows = aAxes("a");
      t.cols = uAxes();
      t.cells = grid({{C::P, C::P, C::P},
                      {C::P, C::P, C::P},
                      {C::P, C::B, C::B},
                      {C::P, C::B, C::B},
                      {C::P, C::B, C::B}});
      break;
    case TableId::A11:
      t.name = "a11";
      t.caption = "Unipotent-homothety rows against triangular-type columns";
      t.rows = uAxes();
      t.cols = bAxes("b");
      t.cells = grid({{C::P, C::P, C::P, C::P, C::P, C::P, C::P},
                      {C::P, C::P, C::P, C::B, C::B, C::B, C::B},
                      {C::P, C::P, C::P, C::B, C::B, C::B, C::B}});
      break;
    case TableId::A12:
      t.name = "a12";
      t.caption = "Diagonal-type rows against diagonal-type columns";
      t.rows = aAxes("a");
      t.cols = aAxes("b");
      t.cells = grid({{C::AbsNe, C::P, C::AbsNe, C::P, C::AbsNe},
                      {C::P, C::B, C::AbsNe1, C::B, C::AbsNe1},
                      {C::AbsNe, C::AbsNe1, C::B, C::B, C::B},
                      {C::P, C::B, C::B, C::B, C::B},
                      {C::AbsNe, C::AbsNe1, C::B, C::B, C::B}});
      break;
    case TableId::A14:
      t.name = "a14";
      t.caption = "Triangular-type rows against triangular-type columns";
      t.rows = bAxes("a");
      t.cols = bAxes("b");
      t.cells = grid({{C::B, C::B, C::AbsLt3, C::B, C::B, C::AbsLt3, C::B},
                      {C::B, C::B, C::P, C::B, C::B, C::P, C::B},
                      {C::AbsLt3, C::P, C::B, C::AbsLt3, C::P, C::B, C::B},
                      {C::B, C::B, C::AbsLt3, C::B, C::B, C::B, C::B},
                      {C::B, C::B, C::P, C::B, C::B, C::B, C::B},
                      {C::AbsLt3, C::P, C::B, C::B, C::B, C::B, C::B},
                      {C::B, C::B, C::B, C::B, C::B, C::B, C::B}});
      break;
  }
  return t;
}

struct KnownCell {
  TableId id;
  std::string rowLabel, colLabel;
  std::function<bool(const CellEval&)> where;
  std::string note;
};

const std::vector<KnownCell>& knownDiscrepancies() {
  auto always = [](const CellEval&) { return true; };
  auto paramIsPlusOne = [](const CellEval& e) {
    const double v = e.hasA ? e.a : e.b;
    return std::abs(v - 1.0) <= 1e-12;
  };
  auto rowParamZero = [](const CellEval& e) { return e.hasA && std::abs(e.a) <= 1e-12; };
  auto colParamZero = [](const CellEval& e) { return e.hasB && std::abs(e.b) <= 1e-12; };
  static const std::vector<KnownCell> k = {
      {TableId::A4, "L(B(-3),3)", "L", std::function<bool(const CellEval&)>{},
       "catalog entry marks this proper; the det-one slice of the row class is the "
       "parabolic-translation class, whose base-table row leaves this cell blank"},
      {TableId::A4, "L(B(-3),3)", "M", {}, "see the L-column note: derived value is blank"},
      {TableId::A4, "L(B(-3),3)", "N", {},
       "the column group is literally contained in the row group, so the pair cannot be "
       "proper; catalog entry kept for reference"},
      {TableId::A5, "L(B',1)", "N", {},
       "derived via the det-one reduction (row slice is the L class, base table blank); an "
       "alternate hand-derivation asserting properness is on record, values agree with this "
       "table"},
      {TableId::A6, "L(D,1)", "N", {},
       "derived via the det-one reduction (row slice is the S class, base table proper); an "
       "alternate hand-derivation asserting non-properness is on record, values agree with "
       "this table"},
      {TableId::A12, "L(A(1),2)", "L(A(b),3)", {},
       "at b=+1 the pair has compact twisted intersections (the signed inclusion partner is "
       "b=-1), so the A-A rule derives proper where the printed |b|!=1 condition says blank"},
      {TableId::A12, "L(A(a),3)", "L(A(1),2)", {}, "transpose of the L(A(1),2) x L(A(b),3) note"},
      {TableId::A14, "L(B(a),4)", "L(B(-3),3)", {},
       "at a=0 the row class degenerates into the det-one block (full det-one group class), "
       "where the reduction yields blank; the printed |a|<3 condition presumes a "
       "triangular-type linear part"},
      {TableId::A14, "L(B(-3),3)", "L(B(b),4)", {}, "transpose of the degenerate a=0 note"},
  };
  static std::vector<KnownCell> filled = [&] {
    std::vector<KnownCell> out = k;
    out[0].where = always;
    out[1].where = always;
    out[2].where = always;
    out[3].where = always;
    out[4].where = always;
    out[5].where = paramIsPlusOne;
    out[6].where = paramIsPlusOne;
    out[7].where = rowParamZero;
    out[8].where = colParamZero;
    return out;
  }();
  return filled;
}

const KnownCell* findKnown(TableId id, const CellEval& e) {
  for (const auto& k : knownDiscrepancies())
    if (k.id == id && k.rowLabel == e.rowLabel && k.colLabel == e.colLabel && k.where(e))
      return &k;
  return nullptr;
}

std::vector<std::optional<double>> axisValues(const Axis& ax, const std::vector<double>& grid) {
  switch (ax.param) {
    case Axis::P::None: return {std::nullopt};
    case Axis::P::Zero: return {0.0};
    case Axis::P::Free: {
      std::vector<std::optional<double>> v;
      for (double g : grid) v.emplace_back(g);
      return v;
    }
    case Axis::P::FreeNonZero: {
      std::vector<std::optional<double>> v;
      for (double g : grid)
        if (std::abs(g) > 1e-12) v.emplace_back(g);
      return v;
    }
  }
  return {std::nullopt};
}

SubgroupSpec axisSpec(const Axis& ax, std::optional<double> v) {
  SubgroupSpec s;
  s.family = ax.family;
  s.index = ax.index;
  s.param = v.value_or(0.0);
  s.ambient = ax.ambient;
  return s;
}

}  // namespace

std::optional<TableId> tableIdFromString(const std::string& sIn) {
  std::string s;
  for (char c : sIn) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  static const std::map<std::string, TableId> m = {
      {"t1", TableId::T1},   {"t2", TableId::T2},   {"t5", TableId::T5},
      {"a1", TableId::A1},   {"a2", TableId::A2},   {"a3", TableId::A3},
      {"a4", TableId::A4},   {"a5", TableId::A5},   {"a6", TableId::A6},
      {"a7", TableId::A7},   {"a8", TableId::A8},   {"a9", TableId::A9},
      {"a10", TableId::A10}, {"a11", TableId::A11}, {"a12", TableId::A12},
      {"a13", TableId::A13}, {"a14", TableId::A14}};
  auto it = m.find(s);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::string tableIdName(TableId id) { return buildTable(id).name; }

TableResult emitTable(TableId id, const std::vector<double>& gridIn, const DecideConfig& cfg) {
  const TableDef def = buildTable(id);
  std::vector<double> grid = gridIn;
  if (grid.empty()) grid = {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 3.0, -3.0, 5.0, -5.0};

  TableResult res;
  res.id = id;
  res.name = def.name;
  res.caption = def.caption;
  for (const auto& r : def.rows) res.rowLabels.push_back(r.label);
  for (const auto& c : def.cols) res.colLabels.push_back(c.label);
  res.cellsTotal = static_cast<int>(def.rows.size() * def.cols.size());

  for (size_t ri = 0; ri < def.rows.size(); ++ri) {
    for (size_t ci = 0; ci < def.cols.size(); ++ci) {
      const Cond cond = def.cells[ri][ci];
      const Axis& ra = def.rows[ri];
      const Axis& ca = def.cols[ci];
      const bool aFree = ra.param == Axis::P::Free || ra.param == Axis::P::FreeNonZero;
      const bool bFree = ca.param == Axis::P::Free || ca.param == Axis::P::FreeNonZero;
      for (const auto& av : axisValues(ra, grid)) {
        for (const auto& bv : axisValues(ca, grid)) {
          CellEval e;
          e.row = static_cast<int>(ri);
          e.col = static_cast<int>(ci);
          e.rowLabel = ra.label;
          e.colLabel = ca.label;
          e.hasA = av.has_value() && (aFree || ra.param == Axis::P::Zero);
          e.hasB = bv.has_value() && (bFree || ca.param == Axis::P::Zero);
          e.a = av.value_or(0.0);
          e.b = bv.value_or(0.0);
          e.condition = condStr(cond);
          e.expected = evalCond(cond, e.a, e.b, aFree, bFree);
          e.got = decide(axisSpec(ra, av), axisSpec(ca, bv), cfg).proper;
          ++res.evaluationsTotal;
          if (e.got != e.expected) {
            if (const KnownCell* k = findKnown(id, e)) {
              e.note = k->note;
              res.warns.push_back(e);
            } else {
              res.mismatches.push_back(e);
            }
          } else if (const KnownCell* k = findKnown(id, e)) {
            // Informational: a cell whose printed value is under tension with an
            // alternate derivation, reported with both values even on agreement.
            e.note = k->note;
            res.warns.push_back(e);
          }
          res.evaluations.push_back(std::move(e));
          if (!condUsesBoth(cond) && !aFree && !bFree) break;  // constant cells: one check
        }
        if (!aFree && ra.param == Axis::P::None && !bFree && ca.param == Axis::P::None) break;
      }
    }
  }
  res.pass = res.mismatches.empty();
  return res;
}

std::string renderTableText(const TableResult& r) {
  std::ostringstream os;
  os << "table " << r.name << ": " << r.caption << "\n";
  size_t w = 12;
  for (const auto& s : r.rowLabels) w = std::max(w, s.size() + 2);
  for (const auto& s : r.colLabels) w = std::max(w, s.size() + 2);

  // Cell summary: proper / blank / condition string per cell, from the
  // condition recorded in the first evaluation of each cell.
  std::map<std::pair<int, int>, std::string> cell;
  for (const auto& e : r.evaluations) {
    auto key = std::make_pair(e.row, e.col);
    if (!cell.count(key)) cell[key] = e.condition;
  }
  os << std::left << std::setw(static_cast<int>(w)) << "L \\ H";
  for (const auto& c : r.colLabels) os << std::setw(static_cast<int>(w)) << c;
  os << "\n";
  for (size_t ri = 0; ri < r.rowLabels.size(); ++ri) {
    os << std::setw(static_cast<int>(w)) << r.rowLabels[ri];
    for (size_t ci = 0; ci < r.colLabels.size(); ++ci)
      os << std::setw(static_cast<int>(w)) << cell[{static_cast<int>(ri), static_cast<int>(ci)}];
    os << "\n";
  }
  os << "cells: " << r.cellsTotal << ", grid evaluations: " << r.evaluationsTotal
     << ", mismatches: " << r.mismatches.size() << ", warns: " << r.warns.size() << "\n";
  auto printEval = [&](const CellEval& e) {
    os << "  [" << e.rowLabel << " x " << e.colLabel << "]";
    if (e.hasA) os << " a=" << e.a;
    if (e.hasB) os << " b=" << e.b;
    os << " table(" << e.condition << ")=" << (e.expected ? "proper" : "-")
       << " derived=" << (e.got ? "proper" : "-");
    if (!e.note.empty()) os << "\n    note: " << e.note;
    os << "\n";
  };
  if (!r.warns.empty()) {
    os << "WARN (known discrepancies, reported with both values):\n";
    for (const auto& e : r.warns) printEval(e);
  }
  if (!r.mismatches.empty()) {
    os << "MISMATCH:\n";
    for (const auto& e : r.mismatches) printEval(e);
  }
  os << (r.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string renderTableCsv(const TableResult& r) {
  std::ostringstream os;
  os << "row,col,a,b,condition,expected,derived,status\n";
  for (const auto& e : r.evaluations) {
    std::string status = "ok";
    if (e.got != e.expected) status = e.note.empty() ? "mismatch" : "warn";
    else if (!e.note.empty()) status = "warn";
    os << '"' << e.rowLabel << '"' << ',' << '"' << e.colLabel << '"' << ','
       << (e.hasA ? std::to_string(e.a) : "") << ',' << (e.hasB ? std::to_string(e.b) : "") << ','
       << '"' << e.condition << '"' << ',' << (e.expected ? 1 : 0) << ',' << (e.got ? 1 : 0) << ','
       << status << "\n";
  }
  return os.str();
}

}  // namespace properpairs
