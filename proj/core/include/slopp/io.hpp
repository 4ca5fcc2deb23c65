#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "slopp/circuit.hpp"
#include "slopp/dataset.hpp"
#include "slopp/error.hpp"
#include "slopp/vtree.hpp"

namespace slopp {

/// Malformed input file. `line` is 1-based.
class FileFormatError : public Error {
 public:
  FileFormatError(std::string path, std::size_t line, std::string message);

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::string path_;
  std::size_t line_;
  std::string message_;
};

// Datasets: one record per line, comma-separated 0/1 values. Identical lines
// are aggregated into one counted record.
Dataset parse_dataset(std::istream& in, const std::string& source = "<stream>");
Dataset load_dataset(const std::filesystem::path& path);

// Vtrees:
//   c <comment>
//   vtree <node count>
//   L <id> <var>
//   I <id> <left id> <right id>
// Children are declared before parents and the last node is the root. The
// writer numbers nodes by their storage (post-order) position.
Vtree parse_vtree(std::istream& in, const std::string& source = "<stream>");
void format_vtree(const Vtree& vtree, std::ostream& out);
Vtree read_vtree(const std::filesystem::path& path);
void write_vtree(const Vtree& vtree, const std::filesystem::path& path);

// PSDDs, against a separately stored vtree:
//   c <comment>
//   psdd <node count>
//   L <id> <vtree id> <signed var>
//   T <id> <vtree id> <var> <log theta>
//   D <id> <vtree id> <k> {<prime id> <sub id> <log weight>}*k
// Children before parents; the last node is the root. Logs are written with
// 17 significant digits, so doubles round-trip exactly.
Circuit parse_psdd(std::istream& in, const Vtree& vtree, const std::string& source = "<stream>");
void format_psdd(const Circuit& circuit, std::ostream& out);
Circuit read_psdd(const std::filesystem::path& path, const Vtree& vtree);
/// Reads the vtree from the sibling file with extension ".vtree".
Circuit read_psdd(const std::filesystem::path& path);
void write_psdd(const Circuit& circuit, const std::filesystem::path& path);

/// Sibling vtree path used by the single-argument read_psdd.
std::filesystem::path vtree_path_for(const std::filesystem::path& psdd_path);

/// Writes `contents` to a temporary file next to `path`, then renames it.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// `%.17g` rendering used by every writer.
std::string format_double(double value);

}  // namespace slopp
