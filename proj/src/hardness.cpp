#include "slidingcubes/hardness.hpp"

#include <algorithm>
#include <stdexcept>

namespace sc {

namespace {

struct Span {
    int lo, hi;
    bool contains(const Span& o) const { return lo <= o.lo && o.hi <= hi; }
    bool disjoint(const Span& o) const { return hi < o.lo || o.hi < lo; }
    int width() const { return hi - lo; }
};

Span clause_span(const std::vector<int>& clause) {
    int lo = std::abs(clause.front()), hi = lo;
    for (int lit : clause) {
        lo = std::min(lo, std::abs(lit));
        hi = std::max(hi, std::abs(lit));
    }
    return {lo, hi};
}

void check_formula(const MonotoneFormula& f) {
    if (f.num_vars < 1) throw std::invalid_argument("formula: needs at least one variable");
    for (size_t i = 0; i < f.clauses.size(); ++i) {
        const auto& cl = f.clauses[i];
        if (cl.empty() || cl.size() > 3)
            throw std::invalid_argument("formula: clause size must be 1..3");
        bool pos = cl[0] > 0;
        for (int lit : cl) {
            if (lit == 0 || std::abs(lit) > f.num_vars)
                throw std::invalid_argument("formula: literal out of range");
            if ((lit > 0) != pos)
                throw std::invalid_argument("formula: clause mixes polarities");
        }
    }
    // laminar spans per half-plane; sharing an endpoint variable is fine
    for (size_t i = 0; i < f.clauses.size(); ++i)
        for (size_t j = i + 1; j < f.clauses.size(); ++j) {
            if (f.clause_positive(i) != f.clause_positive(j)) continue;
            Span a = clause_span(f.clauses[i]);
            Span b = clause_span(f.clauses[j]);
            bool crossing = (a.lo < b.lo && b.lo < a.hi && a.hi < b.hi) ||
                            (b.lo < a.lo && a.lo < b.hi && b.hi < a.hi);
            if (crossing)
                throw std::invalid_argument("formula: clause spans cross; layout not planar");
        }
}

constexpr int kGap = 5;  // connector width between variable gadgets

struct Builder {
    const MonotoneFormula& f;
    SatGadgetLayout layout;
    CellSet cells;

    explicit Builder(const MonotoneFormula& formula) : f(formula) {}

    void put(const Coord& c) {
        if (!cells.insert(c).second)
            throw std::invalid_argument("layout: overlapping gadget cells at " + to_string(c));
    }

    void build() {
        int m = f.num_vars;
        size_t nc = f.clauses.size();

        // tooth slots per variable and polarity
        std::vector<std::map<size_t, int>> slot_pos(m + 1), slot_neg(m + 1);
        std::vector<int> deg_pos(m + 1, 0), deg_neg(m + 1, 0);
        for (int v = 1; v <= m; ++v) {
            // planar tooth order at v: arcs that close at v sit west
            // (innermost first), then arcs passing over v, then arcs opening
            // at v (outermost first)
            struct Inc {
                size_t clause;
                int cls;  // 0 closer, 1 passer, 2 opener; units first
                int tie;
            };
            for (int pol = 0; pol < 2; ++pol) {
                std::vector<Inc> inc;
                for (size_t i = 0; i < nc; ++i) {
                    if (f.clause_positive(i) != (pol == 0)) continue;
                    bool in = false;
                    for (int lit : f.clauses[i])
                        if (std::abs(lit) == v) in = true;
                    if (!in) continue;
                    Span s = clause_span(f.clauses[i]);
                    if (s.lo == s.hi)
                        inc.push_back({i, 0, 1 << 20});  // unit arc, innermost
                    else if (s.hi == v)
                        inc.push_back({i, 0, s.lo});  // inner closers west
                    else if (s.lo == v)
                        inc.push_back({i, 2, s.hi});  // outer openers west
                    else
                        inc.push_back({i, 1, -s.width()});
                }
                std::stable_sort(inc.begin(), inc.end(), [](const Inc& a, const Inc& b) {
                    if (a.cls != b.cls) return a.cls < b.cls;
                    return a.tie > b.tie;
                });
                auto& slots = pol == 0 ? slot_pos[v] : slot_neg[v];
                for (size_t k = 0; k < inc.size(); ++k) slots[inc[k].clause] = (int)k;
                (pol == 0 ? deg_pos[v] : deg_neg[v]) = (int)inc.size();
            }
        }

        // variable gadget extents
        layout.var_x.resize(m + 1);
        layout.var_width.resize(m + 1);
        int x = 1;
        for (int v = 1; v <= m; ++v) {
            layout.var_x[v] = x;
            layout.var_width[v] = 3 * std::max({deg_pos[v], deg_neg[v], 1});
            x += layout.var_width[v];
            if (v < m) {
                layout.connector_x.push_back(x);
                x += kGap;
            }
        }
        layout.east_x = x;

        // variable rows
        for (int v = 1; v <= m; ++v)
            for (int dx = 0; dx < layout.var_width[v]; ++dx)
                for (int y = 0; y <= 2; ++y) put({layout.var_x[v] + dx, y, 0});

        // connectors: three lanes, a riser, and its support column
        for (int g : layout.connector_x) {
            for (int k = 0; k < kGap; ++k)
                for (int y = 0; y <= 2; ++y) put({g + k, y, 0});
            for (const auto& c : CellVec{{g, 0, 1}, {g, 0, 2}, {g, 1, 2}, {g, 2, 2}, {g, 2, 1}})
                put(c);
            for (int y = 0; y <= 2; ++y)
                for (int z = 1; z <= 2; ++z) put({g + 1, y, z});
        }

        // west terminal with its anchoring slab
        int wx = layout.var_x[1] - 1;
        for (int y = 0; y <= 2; ++y) put({wx, y, 0});
        for (int y = 0; y <= 2; ++y) put({wx, y, -1});
        put({wx + 1, 1, -1});
        layout.d_start = {wx, 1, 0};

        // east terminal with its anchoring slab
        int e = layout.east_x;
        for (int y = 0; y <= 2; ++y) put({e, y, 0});
        for (int y = 0; y <= 2; ++y) put({e, y, -1});
        put({e - 1, 0, -1});
        put({e - 1, 2, -1});
        put({e + 1, 1, -1});
        layout.d_end = {e + 1, 1, 0};

        // clause combs: nesting level, spine row, teeth
        std::vector<size_t> order(nc);
        for (size_t i = 0; i < nc; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return clause_span(f.clauses[a]).width() < clause_span(f.clauses[b]).width();
        });
        layout.clause_geom.resize(nc);
        std::vector<int> level(nc, 0);
        for (size_t oi = 0; oi < nc; ++oi) {
            size_t i = order[oi];
            Span si = clause_span(f.clauses[i]);
            int lvl = 1;
            for (size_t oj = 0; oj < oi; ++oj) {
                size_t j = order[oj];
                if (f.clause_positive(i) != f.clause_positive(j)) continue;
                if (si.contains(clause_span(f.clauses[j]))) lvl = std::max(lvl, level[j] + 1);
            }
            level[i] = lvl;
            ClauseGeom& g = layout.clause_geom[i];
            g.positive = f.clause_positive(i);
            g.level = lvl;
            g.spine_y = g.positive ? 2 + 2 * lvl : -2 * lvl;
            for (int lit : f.clauses[i]) {
                int v = std::abs(lit);
                int slot = (g.positive ? slot_pos[v] : slot_neg[v]).at(i);
                g.tooth_x[v] = layout.var_x[v] + 3 * slot + 1;
            }
        }
        for (size_t i = 0; i < nc; ++i) {
            ClauseGeom& g = layout.clause_geom[i];
            int tx_min = g.tooth_x.begin()->second;
            int tx_max = g.tooth_x.rbegin()->second;
            for (const auto& [v, tx] : g.tooth_x) {
                tx_min = std::min(tx_min, tx);
                tx_max = std::max(tx_max, tx);
                if (g.positive)
                    for (int y = 3; y < g.spine_y; ++y) put({tx, y, 0});
                else
                    for (int y = -1; y > g.spine_y; --y) put({tx, y, 0});
            }
            for (int sx = tx_min; sx <= tx_max; ++sx) put({sx, g.spine_y, 0});
        }
    }
};

// --- move assembly helpers ------------------------------------------------

void row_shift(Transformation& t, const SatGadgetLayout& lay, int v, int y, int from_x) {
    int end = lay.var_x[v] + lay.var_width[v];
    for (int x = from_x; x < end; ++x) t.push_back(Move::slide({x, y, 0}, {x + 1, y, 0}));
}

void lane_shift(Transformation& t, int g, int y) {
    for (int k = 0; k < kGap; ++k) t.push_back(Move::slide({g + k, y, 0}, {g + k + 1, y, 0}));
}

void switch_path(Transformation& t, int g, int y_in, int y_out) {
    t.push_back(Move::slide({g, y_in, 0}, {g, y_in, 1}));
    t.push_back(Move::slide({g, y_in, 1}, {g, y_in, 2}));
    t.push_back(Move::slide({g, y_in, 2}, {g, 1, 2}));
    t.push_back(Move::slide({g, 1, 2}, {g, y_out, 2}));
    t.push_back(Move::slide({g, y_out, 2}, {g, y_out, 1}));
    t.push_back(Move::slide({g, y_out, 1}, {g, y_out, 0}));
    lane_shift(t, g, y_out);
}

void west_entry(Transformation& t, const SatGadgetLayout& lay, int y) {
    int wx = lay.var_x[1] - 1;
    t.push_back(Move::slide(lay.d_start, {wx, y, 0}));
    t.push_back(Move::slide({wx, y, 0}, {lay.var_x[1], y, 0}));
}

void east_exit(Transformation& t, const SatGadgetLayout& lay, int y) {
    int e = lay.east_x;
    t.push_back(Move::slide({e, y, 0}, {e, 1, 0}));
    t.push_back(Move::slide({e, 1, 0}, lay.d_end));
}

}  // namespace

SatInstance gen_sat_instance(const MonotoneFormula& formula) {
    check_formula(formula);
    Builder b(formula);
    b.build();
    b.layout.formula = formula;

    CellVec initial = sorted_cells(b.cells);
    CellSet final_set = b.cells;
    final_set.erase(b.layout.d_start);
    final_set.insert(b.layout.d_end);

    SatInstance inst{Configuration(initial), Configuration(sorted_cells(final_set)),
                     std::move(b.layout)};
    return inst;
}

Schedule assignment_to_schedule(const SatInstance& inst, const std::vector<bool>& assignment) {
    const MonotoneFormula& f = inst.layout.formula;
    if ((int)assignment.size() != f.num_vars)
        throw std::invalid_argument("assignment: wrong variable count");
    for (size_t i = 0; i < f.clauses.size(); ++i) {
        bool sat = false;
        for (int lit : f.clauses[i])
            sat = sat || (lit > 0 ? assignment[lit - 1] : !assignment[-lit - 1]);
        if (!sat)
            throw std::invalid_argument("assignment does not satisfy clause " + std::to_string(i + 1));
    }

    // true selects the negative side (y = 0), false the positive side (y = 2)
    auto side = [&](int v) { return assignment[v - 1] ? 0 : 2; };
    const SatGadgetLayout& lay = inst.layout;
    Transformation t;
    west_entry(t, lay, side(1));
    for (int v = 1; v <= f.num_vars; ++v) {
        row_shift(t, lay, v, side(v), lay.var_x[v]);
        if (v < f.num_vars) {
            int g = lay.connector_x[v - 1];
            if (side(v) == side(v + 1))
                lane_shift(t, g, side(v));
            else
                switch_path(t, g, side(v), side(v + 1));
        }
    }
    east_exit(t, lay, side(f.num_vars));
    return Schedule{{t}};
}

Schedule two_step_schedule(const SatInstance& inst) {
    const MonotoneFormula& f = inst.layout.formula;
    const SatGadgetLayout& lay = inst.layout;
    int m = f.num_vars;

    // teeth that must stay put in step one (index-minimal variable of each
    // negative clause) and teeth that must move in step one (index-maximal)
    std::vector<std::vector<int>> keep1(m + 1), move1(m + 1);
    for (size_t i = 0; i < f.clauses.size(); ++i) {
        if (f.clause_positive(i)) continue;
        Span s = clause_span(f.clauses[i]);
        if (s.lo == s.hi)
            throw std::invalid_argument("two_step_schedule: negative unit clause unsupported");
        keep1[s.lo].push_back(lay.clause_geom[i].tooth_x.at(s.lo));
        move1[s.hi].push_back(lay.clause_geom[i].tooth_x.at(s.hi));
    }

    // Sweep west to east, alternating regions: region 2 moves in the second
    // step (starting at the difference module), region 1 in the first.
    // Region 1 starts at a split inside a variable row and ends at a
    // connector slack cell (or the east terminal).
    struct Interval {
        int split_var;
        int split_x;
        int land_connector;  // index into connector_x, or -1 for the east exit
    };
    std::vector<Interval> ones;
    int region = 2;
    for (int v = 1; v <= m; ++v) {
        if (!keep1[v].empty() && region == 1) {
            // land in the connector west of v so v's kept teeth stay put
            if (v == 1) throw std::logic_error("two_step_schedule: region sweep underflow");
            ones.back().land_connector = v - 2;
            region = 2;
        }
        if (!move1[v].empty() && region == 2) {
            int split = *std::min_element(move1[v].begin(), move1[v].end()) - 1;
            if (!keep1[v].empty() && *std::max_element(keep1[v].begin(), keep1[v].end()) >= split)
                throw std::invalid_argument("two_step_schedule: conflicting teeth at variable " +
                                            std::to_string(v));
            ones.push_back({v, split, -1});
            region = 1;
        }
    }

    Transformation step1, step2;
    // step 2 progress pointer: the region-2 chains
    int v2 = 1;            // next variable whose west part is pending for step 2
    int from_x2 = -1;      // -1: chain starts at the west terminal
    for (const auto& iv : ones) {
        // step 2 chain from the current start up to the split (exclusive)
        Transformation* t = &step2;
        if (from_x2 < 0)
            west_entry(*t, lay, 0);
        for (int v = v2; v < iv.split_var; ++v) {
            row_shift(*t, lay, v, 0, from_x2 < 0 ? lay.var_x[v] : from_x2);
            from_x2 = -1;
            int g = lay.connector_x[v - 1];
            lane_shift(*t, g, 0);
        }
        // partial row of the split variable: west cells up to split move in
        // step 2 and land in the hole at split_x
        for (int x = from_x2 < 0 ? lay.var_x[iv.split_var] : from_x2; x < iv.split_x; ++x)
            t->push_back(Move::slide({x, 0, 0}, {x + 1, 0, 0}));
        from_x2 = -1;

        // step 1 chain: from the split eastwards to the landing
        row_shift(step1, lay, iv.split_var, 0, iv.split_x);
        int last = iv.land_connector < 0 ? m : iv.land_connector + 1;
        for (int v = iv.split_var; v <= last; ++v) {
            if (v > iv.split_var) row_shift(step1, lay, v, 0, lay.var_x[v]);
            if (v < last) {
                lane_shift(step1, lay.connector_x[v - 1], 0);
            }
        }
        if (iv.land_connector >= 0) {
            int g = lay.connector_x[iv.land_connector];
            step1.push_back(Move::slide({g, 0, 0}, {g, 0, 1}));
            step1.push_back(Move::slide({g, 0, 1}, {g, 1, 1}));
            // step 2 resumes from the slack cell of this connector
            v2 = iv.land_connector + 2;
            step2.push_back(Move::slide({g, 1, 1}, {g, 0, 1}));
            step2.push_back(Move::slide({g, 0, 1}, {g, 0, 0}));
            lane_shift(step2, g, 0);
            from_x2 = lay.var_x[v2];
        } else {
            east_exit(step1, lay, 0);
            v2 = m + 1;
        }
    }
    if (v2 <= m) {
        // tail region 2 chain through the remaining variables to the exit
        if (from_x2 < 0) west_entry(step2, lay, 0);
        for (int v = v2; v <= m; ++v) {
            row_shift(step2, lay, v, 0, from_x2 < 0 ? lay.var_x[v] : from_x2);
            from_x2 = -1;
            if (v < m) lane_shift(step2, lay.connector_x[v - 1], 0);
        }
        east_exit(step2, lay, 0);
    }

    Schedule out;
    if (!step1.empty()) out.steps.push_back(std::move(step1));
    out.steps.push_back(std::move(step2));
    return out;
}

}  // namespace sc
