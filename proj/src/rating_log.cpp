#include "tdti/rating_log.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

namespace tdti {

namespace {

std::int64_t parse_int(std::string_view field, std::size_t line, const char* name) {
  while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.remove_suffix(1);
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, std::string("field '") + name + "' is not an integer: '" + std::string(field) + "'");
  }
  return v;
}

RatingAction checked(RatingAction a, std::size_t line) {
  if (a.rating < kMinRating || a.rating > kMaxRating) {
    throw ParseError(line, "rating " + std::to_string(a.rating) + " outside [1,5]");
  }
  if (a.ts < 0) throw ParseError(line, "negative timestamp");
  return a;
}

RatingAction parse_tsv_line(std::string_view s, std::size_t line) {
  std::string_view fields[4];
  std::size_t n = 0;
  std::size_t pos = 0;
  while (true) {
    auto tab = s.find('\t', pos);
    if (n == 4) throw ParseError(line, "expected 4 tab-separated fields");
    fields[n++] = s.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos);
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  if (n != 4) throw ParseError(line, "expected 4 tab-separated fields, got " + std::to_string(n));
  RatingAction a;
  a.user = UserId(parse_int(fields[0], line, "user"));
  a.item = ItemId(parse_int(fields[1], line, "item"));
  a.rating = static_cast<Rating>(parse_int(fields[2], line, "rating"));
  a.ts = parse_int(fields[3], line, "timestamp");
  return checked(a, line);
}

std::int64_t json_int(const nlohmann::json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(line, std::string("missing key '") + key + "'");
  if (!it->is_number_integer()) throw ParseError(line, std::string("key '") + key + "' is not an integer");
  return it->get<std::int64_t>();
}

RatingAction parse_json_line(std::string_view s, std::size_t line) {
  auto j = nlohmann::json::parse(s, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError(line, "not a JSON object");
  RatingAction a;
  a.user = UserId(json_int(j, "user", line));
  a.item = ItemId(json_int(j, "item", line));
  a.rating = static_cast<Rating>(json_int(j, "rating", line));
  a.ts = json_int(j, "ts", line);
  return checked(a, line);
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

LogFormat parse_log_format(std::string_view s) {
  if (s == "tsv" || s == "udata") return LogFormat::Tsv;
  if (s == "jsonl") return LogFormat::JsonLines;
  throw Error("unknown log format '" + std::string(s) + "' (expected tsv or jsonl)");
}

std::string_view to_string(LogFormat f) { return f == LogFormat::Tsv ? "tsv" : "jsonl"; }

LogFormat guess_log_format(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  return (ext == ".jsonl" || ext == ".json") ? LogFormat::JsonLines : LogFormat::Tsv;
}

Dataset parse_rating_log(std::istream& in, LogFormat format) {
  std::vector<RatingAction> actions;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    actions.push_back(format == LogFormat::Tsv ? parse_tsv_line(line, lineno) : parse_json_line(line, lineno));
  }
  return Dataset(std::move(actions));
}

Dataset read_rating_log(const std::filesystem::path& p, LogFormat format) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  return parse_rating_log(in, format);
}

void write_rating_log(std::ostream& out, const Dataset& d, LogFormat format) {
  for (const auto& [item, h] : d.histories()) {
    for (const auto& a : h.actions()) {
      if (format == LogFormat::Tsv) {
        out << a.user.value << '\t' << a.item.value << '\t' << a.rating << '\t' << a.ts << '\n';
      } else {
        out << R"({"user":)" << a.user.value << R"(,"item":)" << a.item.value << R"(,"rating":)" << a.rating
            << R"(,"ts":)" << a.ts << "}\n";
      }
    }
  }
}

void write_rating_log(const std::filesystem::path& p, const Dataset& d, LogFormat format) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  write_rating_log(out, d, format);
}

}  // namespace tdti
