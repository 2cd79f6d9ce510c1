#include "ctxcausal/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ctxcausal/errors.hpp"
#include "ctxcausal/log.hpp"

namespace ctxcausal {

namespace {

// One CSV record; handles quoted fields with embedded commas and "" escapes,
// and strips a trailing \r.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size() && std::isfinite(out);
}

}  // namespace

Dataset Dataset::from_columns(std::vector<VariableMeta> vars,
                              std::vector<std::vector<double>> columns, int target) {
    if (vars.size() != columns.size()) throw DataError("variable/column count mismatch");
    if (columns.empty() || columns[0].empty()) throw DataError("dataset must have at least one row");
    const std::size_t n = columns[0].size();
    std::set<std::string> names;
    for (std::size_t v = 0; v < vars.size(); ++v) {
        if (columns[v].size() != n) throw DataError("ragged columns");
        vars[v].id = static_cast<int>(v);
        if (!names.insert(vars[v].name).second)
            throw DataError("duplicate variable name: " + vars[v].name);
        if (vars[v].kind == VarKind::Categorical && vars[v].cardinality() < 2)
            throw DataError("categorical variable needs at least two categories: " + vars[v].name);
    }
    if (target < 0 || target >= static_cast<int>(vars.size()))
        throw DataError("target id out of range");
    if (!vars[target].is_binary())
        throw DataError("target must be a binary categorical variable");

    Dataset d;
    auto table = std::make_shared<Table>();
    table->vars = std::move(vars);
    table->columns = std::move(columns);
    table->target = target;
    d.table_ = std::move(table);
    d.rows_.resize(n);
    for (std::size_t i = 0; i < n; ++i) d.rows_[i] = static_cast<std::int64_t>(i);
    return d;
}

int Dataset::n_vars() const { return table_ ? static_cast<int>(table_->vars.size()) : 0; }

const std::vector<VariableMeta>& Dataset::variables() const { return table_->vars; }

const VariableMeta& Dataset::var(int id) const { return table_->vars.at(id); }

int Dataset::target() const { return table_->target; }

std::optional<int> Dataset::var_id(std::string_view name) const {
    for (const auto& v : table_->vars)
        if (v.name == name) return v.id;
    return std::nullopt;
}

double Dataset::value(std::int64_t row, int var) const {
    return table_->columns[var][rows_[row]];
}

int Dataset::category(std::int64_t row, int var) const {
    return static_cast<int>(value(row, var));
}

int Dataset::y(std::int64_t row) const { return category(row, table_->target); }

const std::vector<std::string>& Dataset::dropped_columns() const {
    return table_->dropped_columns;
}

void Dataset::check_assignment(const Assignment& ctx) const {
    std::set<int> seen;
    for (const auto& term : ctx) {
        if (term.var < 0 || term.var >= n_vars()) throw DataError("condition on unknown variable");
        if (!seen.insert(term.var).second)
            throw DataError("assignment repeats variable " + var(term.var).name);
        const auto& meta = var(term.var);
        if (meta.kind == VarKind::Categorical) {
            if (term.cond.op != Op::Eq) throw DataError("categorical variables take Eq conditions");
            const int c = static_cast<int>(term.cond.value);
            if (c < 0 || c >= meta.cardinality())
                throw DataError("category out of range for " + meta.name);
        } else if (term.cond.op == Op::Eq) {
            throw DataError("numeric variables take Le/Gt conditions");
        }
    }
}

bool Dataset::matches(std::int64_t row, const Assignment& ctx) const {
    for (const auto& term : ctx)
        if (!term.cond.matches(value(row, term.var))) return false;
    return true;
}

Dataset Dataset::subset(const Assignment& ctx) const {
    check_assignment(ctx);
    Dataset out;
    out.table_ = table_;
    out.rows_.reserve(rows_.size());
    const std::int64_t n = n_rows();
    for (std::int64_t i = 0; i < n; ++i)
        if (matches(i, ctx)) out.rows_.push_back(rows_[i]);
    return out;
}

Dataset load_csv(const std::string& path, const std::string& target_name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + path);
    const std::vector<std::string> header = split_csv_line(line);
    const std::size_t n_cols = header.size();
    {
        std::set<std::string> names(header.begin(), header.end());
        if (names.size() != n_cols) throw DataError("duplicate column names in header");
    }

    std::vector<std::vector<std::string>> cells(n_cols);
    std::int64_t dropped = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != n_cols)
            throw DataError("row with " + std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(n_cols));
        const bool missing = std::any_of(fields.begin(), fields.end(),
                                         [](const std::string& f) { return f.empty(); });
        if (missing) {
            ++dropped;
            continue;
        }
        for (std::size_t c = 0; c < n_cols; ++c) cells[c].push_back(std::move(fields[c]));
    }
    const std::size_t n = cells.empty() ? 0 : cells[0].size();
    if (n == 0) throw DataError("no complete rows after missing-value removal: " + path);

    int target_col = -1;
    for (std::size_t c = 0; c < n_cols; ++c)
        if (header[c] == target_name) target_col = static_cast<int>(c);
    if (target_col < 0) throw DataError("target column not found: " + target_name);

    std::vector<VariableMeta> vars;
    std::vector<std::vector<double>> columns;
    std::vector<std::string> dropped_cols;
    int target = -1;
    for (std::size_t c = 0; c < n_cols; ++c) {
        std::set<std::string> distinct(cells[c].begin(), cells[c].end());
        if (static_cast<int>(c) == target_col && distinct.size() != 2)
            throw DataError("target column must take exactly two values, found " +
                            std::to_string(distinct.size()));
        if (distinct.size() < 2) {
            dropped_cols.push_back(header[c]);
            continue;
        }

        bool numeric = distinct.size() > 2 && static_cast<int>(c) != target_col;
        std::vector<double> parsed(n);
        if (numeric) {
            for (std::size_t r = 0; r < n && numeric; ++r)
                numeric = parse_number(cells[c][r], parsed[r]);
        }

        VariableMeta meta;
        meta.name = header[c];
        std::vector<double> col(n);
        if (numeric) {
            meta.kind = VarKind::Numeric;
            col = std::move(parsed);
        } else {
            meta.kind = VarKind::Categorical;
            meta.labels.assign(distinct.begin(), distinct.end());  // sorted by std::set
            std::map<std::string, int> code;
            for (std::size_t k = 0; k < meta.labels.size(); ++k)
                code[meta.labels[k]] = static_cast<int>(k);
            for (std::size_t r = 0; r < n; ++r) col[r] = code[cells[c][r]];
        }
        if (static_cast<int>(c) == target_col) target = static_cast<int>(vars.size());
        vars.push_back(std::move(meta));
        columns.push_back(std::move(col));
    }

    if (dropped > 0)
        log::info("dropped " + std::to_string(dropped) + " rows with missing cells from " + path);
    for (const auto& name : dropped_cols)
        log::info("dropped single-valued column: " + name);

    Dataset d = Dataset::from_columns(std::move(vars), std::move(columns), target);
    d.dropped_ = dropped;
    d.table_->dropped_columns = std::move(dropped_cols);
    return d;
}

ContingencyTable contingency_table(const Dataset& d, int treatment, const Condition& treated) {
    ContingencyTable t;
    const std::int64_t n = d.n_rows();
    for (std::int64_t i = 0; i < n; ++i) {
        const bool in_treated = treated.matches(d.value(i, treatment));
        const bool positive = d.y(i) == 1;
        if (in_treated)
            positive ? ++t.a : ++t.b;
        else
            positive ? ++t.c : ++t.d;
    }
    return t;
}

std::string condition_to_string(const Dataset& d, const VarCondition& vc) {
    const auto& meta = d.var(vc.var);
    std::ostringstream out;
    out << meta.name;
    switch (vc.cond.op) {
        case Op::Eq: {
            const int c = static_cast<int>(vc.cond.value);
            out << " = " << (c >= 0 && c < meta.cardinality() ? meta.labels[c] : "?");
            break;
        }
        case Op::Le:
            out << " <= " << vc.cond.value;
            break;
        case Op::Gt:
            out << " > " << vc.cond.value;
            break;
    }
    return out.str();
}

}  // namespace ctxcausal
