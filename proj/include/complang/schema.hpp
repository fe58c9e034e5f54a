#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "complang/type.hpp"
#include "complang/value.hpp"

namespace complang {

struct ColumnDef {
  std::string name;
  Type type;  // Integer, String or %bool
};

using Row = std::map<std::string, Value>;

struct TableDef {
  std::string name;
  std::vector<ColumnDef> columns;
  std::vector<Row> rows;
};

// Declared tables, associations and fixture rows. The schema type for a
// table is rebuilt from the column list on every request, so handles that
// captured it earlier keep their snapshot; `alter` edits the column list
// and bumps the version.
class SchemaRegistry {
 public:
  bool add_table(const std::string& name, std::vector<ColumnDef> columns);
  void add_assoc(const std::string& from, const std::string& to);
  bool add_row(const std::string& table, Row row);

  bool has_table(const std::string& name) const;
  const TableDef* table(const std::string& name) const;
  const std::vector<std::string>& table_order() const { return order_; }

  // Fresh finite hash `{col: T, ...}` in declaration order.
  std::optional<Type> schema_fh(const std::string& name) const;

  bool assoc_declared(const std::string& from, const std::string& to) const;
  // An empty association section means associations are unchecked.
  bool assocs_declared_at_all() const { return !assocs_.empty(); }

  const std::vector<Row>* rows(const std::string& table) const;

  // Drops a column; returns false when table or column is unknown.
  bool drop_column(const std::string& table, const std::string& column);
  int version() const { return version_; }

  // Tables whose full column set is contained in the given top-level
  // keys; used to recover the base table of a joined schema hash.
  std::vector<std::string> tables_matching_columns(
      const std::vector<std::string>& keys) const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, TableDef> tables_;
  std::vector<std::pair<std::string, std::string>> assocs_;
  int version_ = 0;
};

// Foreign-key naming convention for the fixture DB: the key column that
// points at `base_table` is `<singular base>_id` (users -> user_id). Row
// pairing tries either direction and falls back to the cross product when
// neither side declares the key column.
std::string fk_column_for(const std::string& base_table);

}  // namespace complang
