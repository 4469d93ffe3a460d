#include "gridcarbon/lp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "gridcarbon/errors.hpp"
#include "gridcarbon/format.hpp"

namespace gridcarbon {

int LpProblem::add_variable(double lo, double hi, double cost) {
    lower.push_back(lo);
    upper.push_back(hi);
    objective.push_back(cost);
    return num_vars++;
}

void LpProblem::add_row(std::int64_t id, std::vector<std::pair<int, double>> coeffs, Relation rel,
                        double rhs) {
    rows.push_back(LpRow{id, std::move(coeffs), rel, rhs});
}

namespace {

constexpr double kPivotTol = 1e-10;
constexpr int kRefactorInterval = 64;
// Margins for accepting a warm-start basis as the provably unique optimum.
constexpr double kWarmPrimalMargin = 1e-7;
constexpr double kWarmDualMargin = 1e-7;

enum class VState : std::uint8_t { AtLower = 0, AtUpper = 1, Basic = 2, FreeZero = 3 };

struct Column {
    std::vector<std::pair<int, double>> entries; // (row, coefficient)
    double lo = 0.0;
    double hi = 0.0;
    bool artificial = false;
};

// Bounded-variable revised simplex with Bland's rule and a product-form
// inverse over a dense LU base factorization. Fully deterministic: identical
// problems take identical pivot sequences, and the final solution is always
// extracted from a fresh factorization of the final basis in canonical
// (ascending-column) order, so any path reaching the same basis reports
// bit-identical numbers.
class Simplex {
public:
    explicit Simplex(const LpProblem& problem) : problem_(problem) {
        m_ = static_cast<int>(problem.rows.size());
        n_struct_ = problem.num_vars;
        n_real_ = n_struct_ + m_;
        validate_problem();
        build_columns();
    }

    LpSolution run() {
        set_initial_point();
        if (!phase_one()) {
            LpSolution sol;
            sol.status = LpStatus::Infeasible;
            sol.pivots = pivots_;
            return sol;
        }
        LpStatus status = phase_two();
        if (status != LpStatus::Optimal) {
            LpSolution sol;
            sol.status = status;
            sol.pivots = pivots_;
            return sol;
        }
        return extract();
    }

    // Adopt a caller-supplied basis when it is certifiably the unique
    // optimum; returns false (leaving the caller to cold-solve) otherwise.
    bool try_warm(const LpSolution& hint, LpSolution& out) {
        if (static_cast<int>(hint.basis_state.size()) != n_real_) return false;
        std::vector<int> basic_cols;
        for (int j = 0; j < n_real_; ++j) {
            switch (static_cast<VState>(hint.basis_state[static_cast<std::size_t>(j)])) {
            case VState::Basic:
                basic_cols.push_back(j);
                break;
            case VState::AtLower:
                if (!std::isfinite(cols_[static_cast<std::size_t>(j)].lo)) return false;
                break;
            case VState::AtUpper:
                if (!std::isfinite(cols_[static_cast<std::size_t>(j)].hi)) return false;
                break;
            case VState::FreeZero:
                // A nonbasic free column always admits an alternate optimum
                // direction (or is simply not optimal); never certify it.
                return false;
            default:
                return false;
            }
        }
        if (static_cast<int>(basic_cols.size()) != m_) return false;

        Eigen::MatrixXd basis_matrix(m_, m_);
        basis_matrix.setZero();
        for (int k = 0; k < m_; ++k) {
            for (const auto& [row, coef] : cols_[static_cast<std::size_t>(basic_cols[static_cast<std::size_t>(k)])].entries) {
                basis_matrix(row, k) = coef;
            }
        }
        Eigen::FullPivLU<Eigen::MatrixXd> full(basis_matrix);
        if (!full.isInvertible()) return false;

        // Primal values from the hinted states.
        Eigen::VectorXd residual = b_;
        std::vector<double> value(static_cast<std::size_t>(n_real_), 0.0);
        for (int j = 0; j < n_real_; ++j) {
            auto st = static_cast<VState>(hint.basis_state[static_cast<std::size_t>(j)]);
            if (st == VState::Basic) continue;
            double v = st == VState::AtUpper ? cols_[static_cast<std::size_t>(j)].hi
                                             : (st == VState::AtLower ? cols_[static_cast<std::size_t>(j)].lo : 0.0);
            value[static_cast<std::size_t>(j)] = v;
            if (v != 0.0) {
                for (const auto& [row, coef] : cols_[static_cast<std::size_t>(j)].entries) {
                    residual(row) -= coef * v;
                }
            }
        }
        Eigen::VectorXd xb = full.solve(residual);

        // Strict primal feasibility and nondegeneracy of the basics.
        for (int k = 0; k < m_; ++k) {
            const Column& col = cols_[static_cast<std::size_t>(basic_cols[static_cast<std::size_t>(k)])];
            double v = xb(k);
            if (std::isfinite(col.lo) && v < col.lo + kWarmPrimalMargin) return false;
            if (std::isfinite(col.hi) && v > col.hi - kWarmPrimalMargin) return false;
        }

        // Strict dual feasibility and nondegeneracy of the nonbasics.
        Eigen::VectorXd cb(m_);
        for (int k = 0; k < m_; ++k) {
            cb(k) = phase2_cost(basic_cols[static_cast<std::size_t>(k)]);
        }
        Eigen::VectorXd y = full.transpose().solve(cb);
        for (int j = 0; j < n_real_; ++j) {
            auto st = static_cast<VState>(hint.basis_state[static_cast<std::size_t>(j)]);
            if (st == VState::Basic) continue;
            double d = phase2_cost(j) - dot_column(j, y);
            if (st == VState::AtLower) {
                if (cols_[static_cast<std::size_t>(j)].lo == cols_[static_cast<std::size_t>(j)].hi) continue; // fixed: sign-free
                if (d < kWarmDualMargin) return false;
            } else if (st == VState::AtUpper) {
                if (d > -kWarmDualMargin) return false;
            }
        }

        // Certified: install the basis and extract through the shared path.
        cost_.assign(cols_.size(), 0.0);
        for (int j = 0; j < n_struct_; ++j) {
            cost_[static_cast<std::size_t>(j)] = problem_.objective[static_cast<std::size_t>(j)];
        }
        basis_.assign(basic_cols.begin(), basic_cols.end());
        state_.assign(static_cast<std::size_t>(n_real_), VState::AtLower);
        value_ = value;
        for (int j = 0; j < n_real_; ++j) {
            state_[static_cast<std::size_t>(j)] =
                static_cast<VState>(hint.basis_state[static_cast<std::size_t>(j)]);
        }
        for (int k = 0; k < m_; ++k) {
            value_[static_cast<std::size_t>(basic_cols[static_cast<std::size_t>(k)])] = xb(k);
        }
        out = extract();
        return out.status == LpStatus::Optimal;
    }

private:
    void validate_problem() {
        if (static_cast<int>(problem_.lower.size()) != n_struct_ ||
            static_cast<int>(problem_.upper.size()) != n_struct_ ||
            static_cast<int>(problem_.objective.size()) != n_struct_) {
            throw InternalError("LP variable arrays are inconsistent");
        }
        std::set<std::int64_t> ids;
        for (const LpRow& row : problem_.rows) {
            if (!ids.insert(row.id).second) {
                throw InternalError("duplicate LP row id " + std::to_string(row.id));
            }
            for (const auto& [col, coef] : row.coeffs) {
                if (col < 0 || col >= n_struct_) {
                    throw InternalError("LP row references column " + std::to_string(col) +
                                        " outside [0, " + std::to_string(n_struct_) + ")");
                }
                (void)coef;
            }
        }
        for (int j = 0; j < n_struct_; ++j) {
            if (problem_.lower[static_cast<std::size_t>(j)] >
                problem_.upper[static_cast<std::size_t>(j)]) {
                throw InternalError("LP variable " + std::to_string(j) + " has lower > upper");
            }
        }
    }

    void build_columns() {
        cols_.assign(static_cast<std::size_t>(n_real_), Column{});
        for (int j = 0; j < n_struct_; ++j) {
            cols_[static_cast<std::size_t>(j)].lo = problem_.lower[static_cast<std::size_t>(j)];
            cols_[static_cast<std::size_t>(j)].hi = problem_.upper[static_cast<std::size_t>(j)];
        }
        b_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            const LpRow& row = problem_.rows[static_cast<std::size_t>(i)];
            b_(i) = row.rhs;
            for (const auto& [col, coef] : row.coeffs) {
                if (coef != 0.0) {
                    cols_[static_cast<std::size_t>(col)].entries.push_back({i, coef});
                }
            }
            Column& slack = cols_[static_cast<std::size_t>(n_struct_ + i)];
            slack.entries.push_back({i, 1.0});
            switch (row.rel) {
            case Relation::LessEq:
                slack.lo = 0.0;
                slack.hi = kInf;
                break;
            case Relation::Equal:
                slack.lo = 0.0;
                slack.hi = 0.0;
                break;
            case Relation::GreaterEq:
                slack.lo = -kInf;
                slack.hi = 0.0;
                break;
            }
        }
    }

    double phase2_cost(int j) const {
        if (j < n_struct_) return problem_.objective[static_cast<std::size_t>(j)];
        return 0.0; // slacks and artificials
    }

    double dot_column(int j, const Eigen::VectorXd& y) const {
        double sum = 0.0;
        for (const auto& [row, coef] : cols_[static_cast<std::size_t>(j)].entries) {
            sum += coef * y(row);
        }
        return sum;
    }

    // Nonbasic start: every structural at its nearest finite bound (0 for
    // free columns), slacks basic, artificials covering infeasible slacks.
    void set_initial_point() {
        state_.assign(static_cast<std::size_t>(n_real_), VState::AtLower);
        value_.assign(static_cast<std::size_t>(n_real_), 0.0);
        for (int j = 0; j < n_struct_; ++j) {
            const Column& col = cols_[static_cast<std::size_t>(j)];
            if (std::isfinite(col.lo)) {
                state_[static_cast<std::size_t>(j)] = VState::AtLower;
                value_[static_cast<std::size_t>(j)] = col.lo;
            } else if (std::isfinite(col.hi)) {
                state_[static_cast<std::size_t>(j)] = VState::AtUpper;
                value_[static_cast<std::size_t>(j)] = col.hi;
            } else {
                state_[static_cast<std::size_t>(j)] = VState::FreeZero;
                value_[static_cast<std::size_t>(j)] = 0.0;
            }
        }
        Eigen::VectorXd residual = b_;
        for (int j = 0; j < n_struct_; ++j) {
            double v = value_[static_cast<std::size_t>(j)];
            if (v != 0.0) {
                for (const auto& [row, coef] : cols_[static_cast<std::size_t>(j)].entries) {
                    residual(row) -= coef * v;
                }
            }
        }
        basis_.assign(static_cast<std::size_t>(m_), -1);
        phase1_cost_.assign(static_cast<std::size_t>(n_real_), 0.0);
        for (int i = 0; i < m_; ++i) {
            int slack = n_struct_ + i;
            Column& sc = cols_[static_cast<std::size_t>(slack)];
            double s = residual(i);
            if (s >= sc.lo - kFeasTol && s <= sc.hi + kFeasTol) {
                double clamped = std::min(std::max(s, sc.lo), sc.hi);
                basis_[static_cast<std::size_t>(i)] = slack;
                state_[static_cast<std::size_t>(slack)] = VState::Basic;
                value_[static_cast<std::size_t>(slack)] = clamped;
            } else {
                // Park the slack at its nearest bound and cover the residual
                // with an artificial whose phase-1 cost drives it to zero.
                double parked = s < sc.lo ? sc.lo : sc.hi;
                state_[static_cast<std::size_t>(slack)] = parked == sc.lo ? VState::AtLower
                                                                          : VState::AtUpper;
                value_[static_cast<std::size_t>(slack)] = parked;
                double r = s - parked;
                Column art;
                art.entries.push_back({i, 1.0});
                art.lo = std::min(0.0, r);
                art.hi = std::max(0.0, r);
                art.artificial = true;
                cols_.push_back(art);
                int art_col = static_cast<int>(cols_.size()) - 1;
                basis_[static_cast<std::size_t>(i)] = art_col;
                state_.push_back(VState::Basic);
                value_.push_back(r);
                phase1_cost_.push_back(r > 0 ? 1.0 : -1.0);
            }
        }
        cost_ = phase1_cost_;
        refactorize();
    }

    void refactorize() {
        Eigen::MatrixXd basis_matrix(m_, m_);
        basis_matrix.setZero();
        for (int i = 0; i < m_; ++i) {
            for (const auto& [row, coef] :
                 cols_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])].entries) {
                basis_matrix(row, i) = coef;
            }
        }
        lu_.compute(basis_matrix);
        etas_.clear();
    }

    Eigen::VectorXd ftran(int j) const {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(m_);
        for (const auto& [row, coef] : cols_[static_cast<std::size_t>(j)].entries) {
            v(row) = coef;
        }
        Eigen::VectorXd d = lu_.solve(v);
        for (const auto& [p, eta] : etas_) {
            double dp = d(p) / eta(p);
            for (int i = 0; i < m_; ++i) {
                if (i != p) d(i) -= eta(i) * dp;
            }
            d(p) = dp;
        }
        return d;
    }

    Eigen::VectorXd btran(Eigen::VectorXd v) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            const auto& [p, eta] = *it;
            double acc = v(p);
            for (int i = 0; i < m_; ++i) {
                if (i != p) acc -= eta(i) * v(i);
            }
            v(p) = acc / eta(p);
        }
        return lu_.transpose().solve(v);
    }

    Eigen::VectorXd duals() const {
        Eigen::VectorXd cb(m_);
        for (int i = 0; i < m_; ++i) {
            cb(i) = cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
        }
        return btran(cb);
    }

    // One phase of Bland-rule iterations. Returns the terminal status:
    // Optimal means no improving column remained.
    LpStatus iterate() {
        const int n_total = static_cast<int>(cols_.size());
        const long max_iter = 2000L + 400L * static_cast<long>(n_total);
        for (long iter = 0; iter < max_iter; ++iter) {
            Eigen::VectorXd y = duals();
            int enter = -1;
            int direction = 0;
            for (int j = 0; j < n_total; ++j) {
                VState st = state_[static_cast<std::size_t>(j)];
                if (st == VState::Basic) continue;
                const Column& col = cols_[static_cast<std::size_t>(j)];
                if (col.lo == col.hi) continue; // fixed, can never move
                double d = cost_[static_cast<std::size_t>(j)] - dot_column(j, y);
                if (st == VState::AtLower && d < -kOptTol) {
                    enter = j;
                    direction = +1;
                    break;
                }
                if (st == VState::AtUpper && d > kOptTol) {
                    enter = j;
                    direction = -1;
                    break;
                }
                if (st == VState::FreeZero && std::abs(d) > kOptTol) {
                    enter = j;
                    direction = d < 0 ? +1 : -1;
                    break;
                }
            }
            if (enter < 0) return LpStatus::Optimal;

            Eigen::VectorXd d = ftran(enter);
            const Column& ecol = cols_[static_cast<std::size_t>(enter)];

            double best_t = kInf;
            int leave_pos = -1; // -1: bound flip of the entering column
            double leave_target = 0.0;
            if (std::isfinite(ecol.hi) && std::isfinite(ecol.lo)) {
                best_t = ecol.hi - ecol.lo;
            }
            for (int i = 0; i < m_; ++i) {
                double g = direction * d(i);
                int bcol = basis_[static_cast<std::size_t>(i)];
                const Column& bc = cols_[static_cast<std::size_t>(bcol)];
                double v = value_[static_cast<std::size_t>(bcol)];
                double t = kInf;
                double target = 0.0;
                if (g > kPivotTol && std::isfinite(bc.lo)) {
                    t = (v - bc.lo) / g;
                    target = bc.lo;
                } else if (g < -kPivotTol && std::isfinite(bc.hi)) {
                    t = (bc.hi - v) / (-g);
                    target = bc.hi;
                } else {
                    continue;
                }
                if (t < 0) t = 0; // tolerate microscopic infeasibility
                if (t < best_t - 1e-12) {
                    best_t = t;
                    leave_pos = i;
                    leave_target = target;
                } else if (t < best_t + 1e-12 && leave_pos >= 0 &&
                           bcol < basis_[static_cast<std::size_t>(leave_pos)]) {
                    best_t = std::min(best_t, t);
                    leave_pos = i;
                    leave_target = target;
                }
            }
            if (!std::isfinite(best_t)) return LpStatus::Unbounded;

            // Move the entering variable and update the basics.
            double step = direction * best_t;
            value_[static_cast<std::size_t>(enter)] += step;
            for (int i = 0; i < m_; ++i) {
                value_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] -=
                    best_t * direction * d(i);
            }
            if (leave_pos < 0) {
                // Bound flip, no basis change.
                state_[static_cast<std::size_t>(enter)] =
                    direction > 0 ? VState::AtUpper : VState::AtLower;
                value_[static_cast<std::size_t>(enter)] =
                    direction > 0 ? ecol.hi : ecol.lo;
                continue;
            }
            int leave_col = basis_[static_cast<std::size_t>(leave_pos)];
            if (std::abs(d(leave_pos)) <= kPivotTol) {
                // The eta pivot would be unstable; rebuild and retry once.
                refactorize();
                Eigen::VectorXd d2 = ftran(enter);
                if (std::abs(d2(leave_pos)) <= kPivotTol) return LpStatus::NumericalFailure;
                d = d2;
            }
            value_[static_cast<std::size_t>(leave_col)] = leave_target;
            state_[static_cast<std::size_t>(leave_col)] =
                leave_target == cols_[static_cast<std::size_t>(leave_col)].lo ? VState::AtLower
                                                                              : VState::AtUpper;
            state_[static_cast<std::size_t>(enter)] = VState::Basic;
            basis_[static_cast<std::size_t>(leave_pos)] = enter;
            etas_.push_back({leave_pos, d});
            ++pivots_;
            if (static_cast<int>(etas_.size()) >= kRefactorInterval) {
                refactorize();
            }
        }
        return LpStatus::NumericalFailure;
    }

    bool phase_one() {
        bool any_artificial = false;
        for (const Column& c : cols_) any_artificial |= c.artificial;
        if (any_artificial) {
            cost_.assign(cols_.size(), 0.0);
            for (std::size_t j = 0; j < cols_.size(); ++j) {
                cost_[j] = phase1_cost_.size() > j ? phase1_cost_[j] : 0.0;
            }
            LpStatus status = iterate();
            if (status == LpStatus::NumericalFailure) {
                phase_failed_ = true;
                return false;
            }
            double infeas = 0.0;
            for (std::size_t j = 0; j < cols_.size(); ++j) {
                if (cols_[j].artificial) infeas += std::abs(value_[j]);
            }
            double scale = std::max(1.0, b_.cwiseAbs().maxCoeff());
            if (infeas > kFeasTol * scale * 10.0) return false;
            // Pin every artificial at zero for phase 2.
            for (std::size_t j = 0; j < cols_.size(); ++j) {
                if (!cols_[j].artificial) continue;
                cols_[j].lo = 0.0;
                cols_[j].hi = 0.0;
                if (state_[j] != VState::Basic) {
                    state_[j] = VState::AtLower;
                    value_[j] = 0.0;
                }
            }
        }
        // Phase 2 costs.
        cost_.assign(cols_.size(), 0.0);
        for (int j = 0; j < n_struct_; ++j) {
            cost_[static_cast<std::size_t>(j)] = problem_.objective[static_cast<std::size_t>(j)];
        }
        return true;
    }

    LpStatus phase_two() {
        if (phase_failed_) return LpStatus::NumericalFailure;
        return iterate();
    }

    // Canonical extraction: sort the basic set, factorize it fresh, and
    // recompute every reported quantity from that factorization.
    LpSolution extract() {
        std::vector<int> basic_cols(basis_.begin(), basis_.end());
        std::sort(basic_cols.begin(), basic_cols.end());

        Eigen::MatrixXd basis_matrix(m_, m_);
        basis_matrix.setZero();
        for (int k = 0; k < m_; ++k) {
            for (const auto& [row, coef] :
                 cols_[static_cast<std::size_t>(basic_cols[static_cast<std::size_t>(k)])].entries) {
                basis_matrix(row, k) = coef;
            }
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> fresh(basis_matrix);

        Eigen::VectorXd residual = b_;
        for (int j = 0; j < static_cast<int>(cols_.size()); ++j) {
            if (state_[static_cast<std::size_t>(j)] == VState::Basic) continue;
            double v = value_[static_cast<std::size_t>(j)];
            if (v != 0.0) {
                for (const auto& [row, coef] : cols_[static_cast<std::size_t>(j)].entries) {
                    residual(row) -= coef * v;
                }
            }
        }
        Eigen::VectorXd xb = fresh.solve(residual);
        Eigen::VectorXd cb(m_);
        for (int k = 0; k < m_; ++k) {
            cb(k) = cost_[static_cast<std::size_t>(basic_cols[static_cast<std::size_t>(k)])];
        }
        Eigen::VectorXd y = fresh.transpose().solve(cb);

        std::vector<double> value(cols_.size());
        for (std::size_t j = 0; j < cols_.size(); ++j) value[j] = value_[j];
        for (int k = 0; k < m_; ++k) {
            value[static_cast<std::size_t>(basic_cols[static_cast<std::size_t>(k)])] = xb(k);
        }

        LpSolution sol;
        sol.status = LpStatus::Optimal;
        sol.pivots = pivots_;
        sol.x.assign(value.begin(), value.begin() + n_struct_);
        double obj = 0.0;
        for (int j = 0; j < n_struct_; ++j) {
            obj += problem_.objective[static_cast<std::size_t>(j)] *
                   sol.x[static_cast<std::size_t>(j)];
        }
        sol.objective = obj;

        sol.row_duals.assign(static_cast<std::size_t>(m_), 0.0);
        for (int i = 0; i < m_; ++i) sol.row_duals[static_cast<std::size_t>(i)] = y(i);

        sol.reduced_costs.assign(static_cast<std::size_t>(n_struct_), 0.0);
        for (int j = 0; j < n_struct_; ++j) {
            if (state_[static_cast<std::size_t>(j)] == VState::Basic) {
                sol.reduced_costs[static_cast<std::size_t>(j)] = 0.0;
            } else {
                sol.reduced_costs[static_cast<std::size_t>(j)] =
                    problem_.objective[static_cast<std::size_t>(j)] - dot_column(j, y);
            }
        }

        for (int i = 0; i < m_; ++i) {
            double slack = value[static_cast<std::size_t>(n_struct_ + i)];
            if (std::abs(slack) <= kSlackTol) {
                sol.active_rows.push_back(problem_.rows[static_cast<std::size_t>(i)].id);
            }
        }
        std::sort(sol.active_rows.begin(), sol.active_rows.end());

        for (int j = 0; j < n_struct_; ++j) {
            const Column& col = cols_[static_cast<std::size_t>(j)];
            double v = sol.x[static_cast<std::size_t>(j)];
            if (std::isfinite(col.lo) && std::abs(v - col.lo) <= kSlackTol) {
                sol.active_bounds.push_back({j, BoundSide::Lower});
            } else if (std::isfinite(col.hi) && std::abs(v - col.hi) <= kSlackTol) {
                sol.active_bounds.push_back({j, BoundSide::Upper});
            }
        }

        sol.basis_state.assign(static_cast<std::size_t>(n_real_), 0);
        for (int j = 0; j < n_real_; ++j) {
            sol.basis_state[static_cast<std::size_t>(j)] =
                static_cast<std::uint8_t>(state_[static_cast<std::size_t>(j)]);
        }
        return sol;
    }

    const LpProblem& problem_;
    int m_ = 0;
    int n_struct_ = 0;
    int n_real_ = 0;
    std::vector<Column> cols_;
    Eigen::VectorXd b_;
    std::vector<int> basis_;
    std::vector<VState> state_;
    std::vector<double> value_;
    std::vector<double> cost_;
    std::vector<double> phase1_cost_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    std::vector<std::pair<int, Eigen::VectorXd>> etas_;
    int pivots_ = 0;
    bool phase_failed_ = false;
};

} // namespace

LpSolution solve_lp(const LpProblem& problem) {
    Simplex simplex(problem);
    return simplex.run();
}

LpSolution solve_lp_warm(const LpProblem& problem, const LpSolution& hint) {
    if (hint.status == LpStatus::Optimal && !hint.basis_state.empty()) {
        Simplex warm(problem);
        LpSolution out;
        if (warm.try_warm(hint, out)) {
            return out;
        }
    }
    return solve_lp(problem);
}

std::string dump_problem(const LpProblem& problem) {
    std::ostringstream out;
    out << "min";
    for (int j = 0; j < problem.num_vars; ++j) {
        double c = problem.objective[static_cast<std::size_t>(j)];
        if (c != 0.0) out << " + " << format_double(c) << " x" << j;
    }
    out << "\n";
    for (int j = 0; j < problem.num_vars; ++j) {
        out << "x" << j << " in [" << format_double(problem.lower[static_cast<std::size_t>(j)])
            << ", " << format_double(problem.upper[static_cast<std::size_t>(j)]) << "]\n";
    }
    for (const LpRow& row : problem.rows) {
        out << "r" << row.id << ":";
        for (const auto& [col, coef] : row.coeffs) {
            out << " + " << format_double(coef) << " x" << col;
        }
        switch (row.rel) {
        case Relation::LessEq: out << " <= "; break;
        case Relation::Equal: out << " == "; break;
        case Relation::GreaterEq: out << " >= "; break;
        }
        out << format_double(row.rhs) << "\n";
    }
    return out.str();
}

} // namespace gridcarbon
