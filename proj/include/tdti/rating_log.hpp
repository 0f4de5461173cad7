#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "tdti/types.hpp"

namespace tdti {

/// Tsv is the MovieLens u.data layout: `user<TAB>item<TAB>rating<TAB>timestamp`.
/// JsonLines is one `{"user":..,"item":..,"rating":..,"ts":..}` object per line.
enum class LogFormat { Tsv, JsonLines };

LogFormat parse_log_format(std::string_view s);
std::string_view to_string(LogFormat f);
/// `.jsonl` / `.json` select JsonLines, anything else Tsv.
LogFormat guess_log_format(const std::filesystem::path& p);

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads a rating log. Blank lines are skipped; any malformed line throws
/// ParseError carrying its 1-based line number.
Dataset parse_rating_log(std::istream& in, LogFormat format);
Dataset read_rating_log(const std::filesystem::path& p, LogFormat format);

/// Writes every action, items in id order and each history in time order.
void write_rating_log(std::ostream& out, const Dataset& d, LogFormat format);
void write_rating_log(const std::filesystem::path& p, const Dataset& d, LogFormat format);

}  // namespace tdti
