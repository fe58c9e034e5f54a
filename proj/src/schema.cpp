#include "complang/schema.hpp"

#include <algorithm>

namespace complang {

bool SchemaRegistry::add_table(const std::string& name,
                               std::vector<ColumnDef> columns) {
  if (tables_.count(name)) return false;
  TableDef def;
  def.name = name;
  def.columns = std::move(columns);
  tables_[name] = std::move(def);
  order_.push_back(name);
  return true;
}

void SchemaRegistry::add_assoc(const std::string& from, const std::string& to) {
  assocs_.emplace_back(from, to);
}

bool SchemaRegistry::add_row(const std::string& table, Row row) {
  auto it = tables_.find(table);
  if (it == tables_.end()) return false;
  it->second.rows.push_back(std::move(row));
  return true;
}

bool SchemaRegistry::has_table(const std::string& name) const {
  return tables_.count(name) != 0;
}

const TableDef* SchemaRegistry::table(const std::string& name) const {
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : &it->second;
}

std::optional<Type> SchemaRegistry::schema_fh(const std::string& name) const {
  auto it = tables_.find(name);
  if (it == tables_.end()) return std::nullopt;
  std::vector<std::pair<std::string, Type>> fields;
  fields.reserve(it->second.columns.size());
  for (auto& col : it->second.columns) {
    fields.emplace_back(col.name, deep_copy_type(col.type));
  }
  return t_finite_hash(std::move(fields));
}

bool SchemaRegistry::assoc_declared(const std::string& from,
                                    const std::string& to) const {
  for (auto& [f, t] : assocs_) {
    if (f == from && t == to) return true;
  }
  return false;
}

const std::vector<Row>* SchemaRegistry::rows(const std::string& table) const {
  auto it = tables_.find(table);
  return it == tables_.end() ? nullptr : &it->second.rows;
}

bool SchemaRegistry::drop_column(const std::string& table,
                                 const std::string& column) {
  auto it = tables_.find(table);
  if (it == tables_.end()) return false;
  auto& cols = it->second.columns;
  auto pos = std::find_if(cols.begin(), cols.end(), [&](const ColumnDef& c) {
    return c.name == column;
  });
  if (pos == cols.end()) return false;
  cols.erase(pos);
  for (auto& row : it->second.rows) row.erase(column);
  ++version_;
  return true;
}

std::vector<std::string> SchemaRegistry::tables_matching_columns(
    const std::vector<std::string>& keys) const {
  std::vector<std::string> out;
  for (auto& name : order_) {
    const TableDef& def = tables_.at(name);
    bool all = !def.columns.empty();
    for (auto& col : def.columns) {
      if (std::find(keys.begin(), keys.end(), col.name) == keys.end()) {
        all = false;
        break;
      }
    }
    if (all) out.push_back(name);
  }
  return out;
}

std::string fk_column_for(const std::string& base_table) {
  std::string singular = base_table;
  if (singular.size() > 1 && singular.back() == 's') singular.pop_back();
  return singular + "_id";
}

}  // namespace complang
