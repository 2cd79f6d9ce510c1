#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctxcausal {

enum class VarKind { Categorical, Numeric };

struct VariableMeta {
    std::string name;
    VarKind kind = VarKind::Categorical;
    std::vector<std::string> labels;  // categorical only; sorted, index = category code
    int id = -1;

    int cardinality() const { return static_cast<int>(labels.size()); }
    bool is_binary() const { return kind == VarKind::Categorical && labels.size() == 2; }
};

enum class Op { Eq, Le, Gt };

// A single test against one variable: Eq on a category code, Le/Gt on a
// numeric threshold.
struct Condition {
    Op op = Op::Eq;
    double value = 0.0;

    bool matches(double cell) const {
        switch (op) {
            case Op::Eq: return cell == value;
            case Op::Le: return cell <= value;
            case Op::Gt: return cell > value;
        }
        return false;
    }

    friend bool operator==(const Condition&, const Condition&) = default;
};

struct VarCondition {
    int var = -1;
    Condition cond;

    friend bool operator==(const VarCondition&, const VarCondition&) = default;
};

// Conjunction of conditions over distinct variables. Order is
// caller-defined (root-to-leaf for decision rules, var-id order for
// canonical contexts).
using Assignment = std::vector<VarCondition>;

// 2x2 counts of a binary treatment against the binary target:
//   a = treated & Y=1, b = treated & Y=0, c = control & Y=1, d = control & Y=0
struct ContingencyTable {
    std::int64_t a = 0, b = 0, c = 0, d = 0;

    std::int64_t n() const { return a + b + c + d; }
};

// Immutable columnar table. Subsets share storage and only re-index rows,
// so any number of readers may slice the same dataset concurrently.
class Dataset {
public:
    Dataset() = default;

    static Dataset from_columns(std::vector<VariableMeta> vars,
                                std::vector<std::vector<double>> columns, int target);

    std::int64_t n_rows() const { return static_cast<std::int64_t>(rows_.size()); }
    int n_vars() const;
    const std::vector<VariableMeta>& variables() const;
    const VariableMeta& var(int id) const;
    int target() const;
    std::optional<int> var_id(std::string_view name) const;

    double value(std::int64_t row, int var) const;
    int category(std::int64_t row, int var) const;
    // target class in {0, 1}
    int y(std::int64_t row) const;

    bool matches(std::int64_t row, const Assignment& ctx) const;
    Dataset subset(const Assignment& ctx) const;

    // rows removed at ingestion because of missing cells
    std::int64_t dropped_rows() const { return dropped_; }
    // columns removed at ingestion because they held a single value
    const std::vector<std::string>& dropped_columns() const;

private:
    struct Table {
        std::vector<VariableMeta> vars;
        std::vector<std::vector<double>> columns;
        int target = -1;
        std::vector<std::string> dropped_columns;
    };

    std::shared_ptr<Table> table_;  // never mutated after construction
    std::vector<std::int64_t> rows_;  // logical -> physical index
    std::int64_t dropped_ = 0;

    void check_assignment(const Assignment& ctx) const;

    friend Dataset load_csv(const std::string&, const std::string&);
};

// Reads a comma-separated file (RFC-4180 basics, header row mandatory,
// empty cell = missing). Rows with missing cells and single-valued columns
// are dropped. A column is numeric when every cell parses as a number and
// more than two distinct values occur; otherwise it is categorical with
// codes assigned in sorted label order.
Dataset load_csv(const std::string& path, const std::string& target_name);

// Table-1 style counts: rows satisfying `treated` on the treatment variable
// form the X=1 arm, the rest the X=0 arm.
ContingencyTable contingency_table(const Dataset& d, int treatment, const Condition& treated);

std::string condition_to_string(const Dataset& d, const VarCondition& vc);

}  // namespace ctxcausal
