#include "arrayaudit/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace arrayaudit::ingest {

namespace detail {
extern const char* const kDefaultLabelSynonyms;
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error("line " + std::to_string(line) + (column ? ", column " + std::to_string(column) : std::string()) +
            ": " + message),
      line_(line), column_(column) {}

namespace {

struct Line {
    std::size_t number;  // 1-based
    std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 1;
    while (!text.empty()) {
        auto pos = text.find('\n');
        auto line = text.substr(0, pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        out.push_back({number++, line});
        if (pos == std::string_view::npos) {
            break;
        }
        text.remove_prefix(pos + 1);
    }
    return out;
}

std::vector<Line> non_blank(std::vector<Line> lines) {
    std::erase_if(lines, [](const Line& l) {
        return std::all_of(l.text.begin(), l.text.end(), [](unsigned char c) { return std::isspace(c); });
    });
    return lines;
}

std::vector<std::string_view> split_cells(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    while (true) {
        auto pos = line.find(delim);
        out.push_back(line.substr(0, pos));
        if (pos == std::string_view::npos) {
            break;
        }
        line.remove_prefix(pos + 1);
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

// Strict decimal parse: the whole cell must be consumed, no leading '+',
// no whitespace, no hex, no "inf"/"nan" spellings.
std::optional<double> parse_number(std::string_view cell) {
    if (cell.empty()) {
        return std::nullopt;
    }
    for (char c : cell) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == 'e' || c == 'E' ||
              c == '+')) {
            return std::nullopt;
        }
    }
    if (cell.front() == '+') {
        return std::nullopt;
    }
    double v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v, std::chars_format::general);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        return std::nullopt;
    }
    return v;
}

bool is_header(std::string_view first_cell, std::string_view expected) {
    return lower(trim(first_cell)) == expected;
}

std::vector<std::vector<std::string_view>> split_table(const std::vector<Line>& lines, char delim) {
    std::vector<std::vector<std::string_view>> out;
    out.reserve(lines.size());
    for (const auto& l : lines) {
        auto cells = split_cells(l.text, delim);
        for (auto& c : cells) {
            c = trim(c);
        }
        out.push_back(std::move(cells));
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace

char delimiter_char(Delimiter d) {
    return d == Delimiter::Tab ? '\t' : ',';
}

Delimiter sniff_delimiter(std::string_view text) {
    for (const auto& l : non_blank(split_lines(text))) {
        return l.text.find('\t') != std::string_view::npos ? Delimiter::Tab : Delimiter::Comma;
    }
    return Delimiter::Comma;
}

const LabelSynonyms& LabelSynonyms::defaults() {
    static const LabelSynonyms table = parse(detail::kDefaultLabelSynonyms);
    return table;
}

LabelSynonyms LabelSynonyms::parse(std::string_view text) {
    LabelSynonyms out;
    for (const auto& l : split_lines(text)) {
        auto t = trim(l.text);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        auto tab = t.find('\t');
        if (tab == std::string_view::npos) {
            throw ParseError(l.number, 0, "expected 'token<TAB>Label'");
        }
        auto label = parse_group_label(trim(t.substr(tab + 1)));
        if (!label) {
            throw ParseError(l.number, 2, "unknown canonical label '" + std::string(trim(t.substr(tab + 1))) + "'");
        }
        out.add(std::string(trim(t.substr(0, tab))), *label);
    }
    return out;
}

std::optional<GroupLabel> LabelSynonyms::lookup(std::string_view token) const {
    auto key = lower(trim(token));
    if (key.empty()) {
        return GroupLabel::Unknown;
    }
    auto it = table_.find(key);
    if (it == table_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void LabelSynonyms::add(std::string token, GroupLabel label) {
    table_[lower(token)] = label;
}

LabeledMatrix parse_matrix(std::string_view text, const MatrixFormat& fmt, const LabelSynonyms& synonyms) {
    const char delim = delimiter_char(fmt.delimiter);
    auto lines = split_lines(text);
    while (!lines.empty() && lines.back().text.empty()) {
        lines.pop_back();
    }
    if (lines.empty()) {
        throw ParseError(1, 0, "empty matrix file");
    }

    LabeledMatrix m;
    auto header = split_cells(lines[0].text, delim);
    if (header.size() < 2) {
        throw ParseError(1, 0, "header needs a corner cell and at least one sample id");
    }
    std::unordered_set<std::string_view> seen_samples;
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c].empty()) {
            throw ParseError(1, c + 1, "empty sample id");
        }
        if (!seen_samples.insert(header[c]).second) {
            throw ParseError(1, c + 1, "duplicate sample id '" + std::string(header[c]) + "'");
        }
        m.sample_ids.emplace_back(header[c]);
    }
    const std::size_t width = header.size();

    std::size_t first_data = 1;
    if (fmt.has_label_row) {
        if (lines.size() < 2) {
            throw ParseError(2, 0, "missing label row");
        }
        auto cells = split_cells(lines[1].text, delim);
        if (cells[0] != fmt.label_row_key) {
            throw ParseError(2, 1, "label row must start with '" + fmt.label_row_key + "'");
        }
        if (cells.size() != width) {
            throw ParseError(2, 0, "expected " + std::to_string(width) + " cells, found " + std::to_string(cells.size()));
        }
        for (std::size_t c = 1; c < width; ++c) {
            auto label = synonyms.lookup(cells[c]);
            if (!label) {
                throw ParseError(2, c + 1, "unknown label '" + std::string(cells[c]) + "'");
            }
            m.labels.emplace(m.sample_ids[c - 1], *label);
        }
        first_data = 2;
    }

    std::unordered_set<std::string_view> seen_features;
    m.values.reserve((lines.size() - first_data) * m.n_samples());
    for (std::size_t i = first_data; i < lines.size(); ++i) {
        const auto& line = lines[i];
        auto cells = split_cells(line.text, delim);
        if (cells.size() != width) {
            throw ParseError(line.number, 0,
                             "ragged row: expected " + std::to_string(width) + " cells, found " +
                                 std::to_string(cells.size()));
        }
        if (cells[0].empty()) {
            throw ParseError(line.number, 1, "empty feature id");
        }
        if (!seen_features.insert(cells[0]).second) {
            throw ParseError(line.number, 1, "duplicate feature id '" + std::string(cells[0]) + "'");
        }
        m.feature_ids.emplace_back(cells[0]);
        for (std::size_t c = 1; c < width; ++c) {
            if (cells[c] == fmt.missing_token) {
                m.values.push_back(kMissing);
                continue;
            }
            auto v = parse_number(cells[c]);
            if (!v || !std::isfinite(*v)) {
                throw ParseError(line.number, c + 1, "unparseable numeric cell '" + std::string(cells[c]) + "'");
            }
            m.values.push_back(*v);
        }
    }
    return m;
}

std::string serialize_matrix(const LabeledMatrix& m, const MatrixFormat& fmt) {
    const char delim = delimiter_char(fmt.delimiter);
    std::string out = "feature_id";
    for (const auto& s : m.sample_ids) {
        out += delim;
        out += s;
    }
    out += '\n';
    if (fmt.has_label_row) {
        out += fmt.label_row_key;
        for (const auto& s : m.sample_ids) {
            out += delim;
            out += to_string(m.label_of(s));
        }
        out += '\n';
    }
    for (std::size_t r = 0; r < m.n_features(); ++r) {
        out += m.feature_ids[r];
        for (double v : m.row(r)) {
            out += delim;
            out += is_missing(v) ? fmt.missing_token : format_double(v);
        }
        out += '\n';
    }
    return out;
}

LabelRoster parse_roster(std::string_view text, const LabelSynonyms& synonyms) {
    auto lines = non_blank(split_lines(text));
    const char delim = delimiter_char(sniff_delimiter(text));
    auto rows = split_table(lines, delim);

    LabelRoster roster;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& cells = rows[i];
        if (i == 0 && is_header(cells[0], "sample_id")) {
            continue;
        }
        if (cells.size() < 2 || cells.size() > 4) {
            throw ParseError(lines[i].number, 0, "expected sample_id,label[,source[,note]]");
        }
        if (cells[0].empty()) {
            throw ParseError(lines[i].number, 1, "empty sample id");
        }
        auto label = synonyms.lookup(cells[1]);
        if (!label) {
            throw ParseError(lines[i].number, 2, "unknown label '" + std::string(cells[1]) + "'");
        }
        RosterEntry e{std::string(cells[0]), *label, cells.size() > 2 ? std::string(cells[2]) : std::string(),
                      std::nullopt};
        if (cells.size() > 3 && !cells[3].empty()) {
            e.note = std::string(cells[3]);
        }
        roster.entries.push_back(std::move(e));
    }
    if (roster.entries.empty()) {
        throw ParseError(1, 0, "roster has no entries");
    }
    return roster;
}

std::string serialize_roster(const LabelRoster& roster) {
    std::string out = "sample_id,label,source,note\n";
    for (const auto& e : roster.entries) {
        out += e.sample_id + "," + std::string(to_string(e.label)) + "," + e.source_id + "," + e.note.value_or("") + "\n";
    }
    return out;
}

SignatureList parse_signature(std::string_view text) {
    auto lines = non_blank(split_lines(text));
    const char delim = delimiter_char(sniff_delimiter(text));
    auto rows = split_table(lines, delim);

    SignatureList sig;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& cells = rows[i];
        if (i == 0 && is_header(cells[0], "feature_id")) {
            continue;
        }
        if (cells.size() > 2 || cells[0].empty()) {
            throw ParseError(lines[i].number, 0, "expected feature_id[,direction]");
        }
        std::string id(cells[0]);
        if (seen.insert(id).second) {
            sig.feature_ids.push_back(id);
        }
        if (cells.size() == 2 && !cells[1].empty()) {
            auto d = lower(cells[1]);
            if (d == "upinresistant" || d == "up_resistant" || d == "r") {
                sig.directions.emplace_back(id, Direction::UpInResistant);
            } else if (d == "upinsensitive" || d == "up_sensitive" || d == "s") {
                sig.directions.emplace_back(id, Direction::UpInSensitive);
            } else {
                throw ParseError(lines[i].number, 2, "unknown direction '" + std::string(cells[1]) + "'");
            }
        }
    }
    if (sig.feature_ids.empty()) {
        throw ParseError(1, 0, "signature has no features");
    }
    return sig;
}

std::string serialize_signature(const SignatureList& sig) {
    std::string out = "feature_id,direction\n";
    for (const auto& id : sig.feature_ids) {
        bool any = false;
        for (const auto& [fid, d] : sig.directions) {
            if (fid == id) {
                out += id + "," + std::string(to_string(d)) + "\n";
                any = true;
            }
        }
        if (!any) {
            out += id + ",\n";
        }
    }
    return out;
}

AnnotationIndex parse_annotation(std::string_view text) {
    auto lines = non_blank(split_lines(text));
    if (lines.empty()) {
        throw ParseError(1, 0, "annotation needs a platform id line");
    }
    std::string platform(trim(lines[0].text));
    std::vector<std::string> ids;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string id(trim(lines[i].text));
        if (id.find_first_of("\t,") != std::string::npos) {
            throw ParseError(lines[i].number, 0, "expected one feature id per line");
        }
        if (!seen.insert(id).second) {
            throw ParseError(lines[i].number, 1, "duplicate feature id '" + id + "'");
        }
        ids.push_back(std::move(id));
    }
    return AnnotationIndex(std::move(platform), std::move(ids));
}

std::string serialize_annotation(const AnnotationIndex& ann) {
    std::string out = ann.platform_id() + "\n";
    for (const auto& id : ann.feature_ids()) {
        out += id + "\n";
    }
    return out;
}

std::vector<SensitivityRecord> parse_sensitivity(std::string_view text) {
    auto lines = non_blank(split_lines(text));
    const char delim = delimiter_char(sniff_delimiter(text));
    auto rows = split_table(lines, delim);

    std::vector<SensitivityRecord> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& cells = rows[i];
        if (i == 0 && is_header(cells[0], "cell_line")) {
            continue;
        }
        if (cells.size() != 4) {
            throw ParseError(lines[i].number, 0, "expected cell_line,drug_id,measure,value");
        }
        auto measure = parse_measure(cells[2]);
        if (!measure) {
            throw ParseError(lines[i].number, 3, "unknown measure '" + std::string(cells[2]) + "'");
        }
        auto value = parse_number(cells[3]);
        if (!value || !std::isfinite(*value)) {
            throw ParseError(lines[i].number, 4, "unparseable value '" + std::string(cells[3]) + "'");
        }
        out.push_back({std::string(cells[0]), std::string(cells[1]), *measure, *value});
    }
    return out;
}

std::string serialize_sensitivity(const std::vector<SensitivityRecord>& records) {
    std::string out = "cell_line,drug_id,measure,value\n";
    for (const auto& r : records) {
        out += r.cell_line + "," + r.drug_id + "," + std::string(to_string(r.measure)) + "," + format_double(r.value) +
               "\n";
    }
    return out;
}

std::optional<std::chrono::sys_seconds> parse_timestamp(std::string_view s) {
    using namespace std::chrono;
    auto digits = [&](std::size_t pos, std::size_t n) -> std::optional<int> {
        if (pos + n > s.size()) {
            return std::nullopt;
        }
        int v = 0;
        for (std::size_t i = pos; i < pos + n; ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
                return std::nullopt;
            }
            v = v * 10 + (s[i] - '0');
        }
        return v;
    };

    auto y = digits(0, 4), mo = digits(5, 2), d = digits(8, 2);
    if (!y || !mo || !d || s[4] != '-' || s[7] != '-') {
        return std::nullopt;
    }
    year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    sys_seconds t = sys_days{ymd};
    std::size_t pos = 10;
    if (pos == s.size()) {
        return t;
    }
    if (s[pos] != 'T' && s[pos] != ' ') {
        return std::nullopt;
    }
    auto hh = digits(pos + 1, 2), mm = digits(pos + 4, 2);
    if (!hh || !mm || s[pos + 3] != ':' || *hh > 23 || *mm > 59) {
        return std::nullopt;
    }
    t += hours{*hh} + minutes{*mm};
    pos += 6;
    if (pos < s.size() && s[pos] == ':') {
        auto ss = digits(pos + 1, 2);
        if (!ss || *ss > 60) {
            return std::nullopt;
        }
        t += seconds{*ss};
        pos += 3;
    }
    if (pos == s.size()) {
        return t;
    }
    if (s[pos] == 'Z' && pos + 1 == s.size()) {
        return t;
    }
    if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
        auto oh = digits(pos + 1, 2), om = digits(pos + 4, 2);
        if (!oh || !om) {
            return std::nullopt;
        }
        auto offset = hours{*oh} + minutes{*om};
        return s[pos] == '+' ? t - offset : t + offset;
    }
    return std::nullopt;
}

std::string format_timestamp(std::chrono::sys_seconds t) {
    using namespace std::chrono;
    auto day_point = floor<days>(t);
    year_month_day ymd{day_point};
    hh_mm_ss hms{t - day_point};
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                  static_cast<long>(hms.seconds().count()));
    return buf;
}

std::vector<SampleMeta> parse_sample_meta(std::string_view text) {
    auto lines = non_blank(split_lines(text));
    const char delim = delimiter_char(sniff_delimiter(text));
    auto rows = split_table(lines, delim);

    std::vector<SampleMeta> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& cells = rows[i];
        const auto line = lines[i].number;
        if (i == 0 && is_header(cells[0], "sample_id")) {
            continue;
        }
        if (cells.size() != 5) {
            throw ParseError(line, 0, "expected sample_id,run_timestamp,scanner_id,treatment_arm,included");
        }
        if (cells[0].empty()) {
            throw ParseError(line, 1, "empty sample id");
        }
        auto ts = parse_timestamp(cells[1]);
        if (!ts) {
            throw ParseError(line, 2, "bad timestamp '" + std::string(cells[1]) + "' for sample '" +
                                          std::string(cells[0]) + "'");
        }
        if (cells[4] != "0" && cells[4] != "1") {
            throw ParseError(line, 5, "included must be 0 or 1");
        }
        out.push_back({std::string(cells[0]), *ts, std::string(cells[2]), std::string(cells[3]), cells[4] == "1"});
    }
    return out;
}

std::string serialize_sample_meta(const std::vector<SampleMeta>& metas) {
    std::string out = "sample_id,run_timestamp,scanner_id,treatment_arm,included\n";
    for (const auto& m : metas) {
        out += m.sample_id + "," + format_timestamp(m.run_timestamp) + "," + m.scanner_id + "," + m.treatment_arm +
               "," + (m.included ? "1" : "0") + "\n";
    }
    return out;
}

NumericTable parse_numeric_table(std::string_view text) {
    auto lines = non_blank(split_lines(text));
    if (lines.empty()) {
        throw ParseError(1, 0, "table is empty");
    }
    const char delim = delimiter_char(sniff_delimiter(text));
    auto rows = split_table(lines, delim);
    NumericTable out;
    for (std::size_t j = 1; j < rows[0].size(); ++j) {
        out.columns.emplace_back(rows[0][j]);
    }
    if (out.columns.empty()) {
        throw ParseError(lines[0].number, 0, "header names no value columns");
    }
    std::unordered_set<std::string> seen;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& cells = rows[i];
        if (cells.size() != out.columns.size() + 1) {
            throw ParseError(lines[i].number, 0,
                             "expected " + std::to_string(out.columns.size() + 1) + " cells, found " +
                                 std::to_string(cells.size()));
        }
        std::string id(cells[0]);
        if (id.empty() || !seen.insert(id).second) {
            throw ParseError(lines[i].number, 1, "empty or duplicate row id '" + id + "'");
        }
        std::vector<double> values;
        for (std::size_t j = 1; j < cells.size(); ++j) {
            auto v = parse_number(cells[j]);
            if (!v) {
                throw ParseError(lines[i].number, j + 1, "unparseable number '" + std::string(cells[j]) + "'");
            }
            values.push_back(*v);
        }
        out.row_ids.push_back(std::move(id));
        out.rows.push_back(std::move(values));
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<GroupLabel, std::size_t> label_census(const LabeledMatrix& m) {
    std::map<GroupLabel, std::size_t> out;
    for (const auto& s : m.sample_ids) {
        ++out[m.label_of(s)];
    }
    return out;
}

}  // namespace arrayaudit::ingest
