#include "scalebench/keel_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "scalebench/error.hpp"
#include "scalebench/text.hpp"

namespace scalebench {

namespace {

struct Line {
    std::size_t number;  // 1-based
    std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t start = 0, number = 1;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        lines.push_back({number++, text::trim(text.substr(start, end - start))});
        start = end + 1;
    }
    return lines;
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
    throw ParseError("line " + std::to_string(line) + ": " + message);
}

std::string_view keyword_of(std::string_view line) {
    std::size_t end = 0;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '{' && line[end] != '[') ++end;
    return line.substr(0, end);
}

std::vector<std::string> name_list(std::string_view rest) {
    std::vector<std::string> names;
    for (auto& n : text::split_trimmed(rest, ','))
        if (!n.empty()) names.push_back(n);
    return names;
}

ColumnSpec parse_attribute(const Line& line, std::string_view rest) {
    rest = text::trim(rest);
    ColumnSpec col;
    std::size_t name_end = 0;
    if (!rest.empty() && rest.front() == '\'') {
        name_end = rest.find('\'', 1);
        if (name_end == std::string_view::npos) fail(line.number, "unterminated quoted attribute name");
        col.name = std::string(rest.substr(1, name_end - 1));
        ++name_end;
    } else {
        while (name_end < rest.size() && rest[name_end] != ' ' && rest[name_end] != '\t' && rest[name_end] != '{')
            ++name_end;
        col.name = std::string(rest.substr(0, name_end));
    }
    if (col.name.empty()) fail(line.number, "attribute without a name");
    auto type = text::trim(rest.substr(name_end));

    if (!type.empty() && type.front() == '{') {
        const auto close = type.rfind('}');
        if (close == std::string_view::npos) fail(line.number, "unterminated value list for '" + col.name + "'");
        col.kind = ColumnKind::Categorical;
        col.values = name_list(type.substr(1, close - 1));
        if (col.values.empty()) fail(line.number, "empty value list for '" + col.name + "'");
        return col;
    }

    const auto word = keyword_of(type);
    if (text::iequals(word, "real") || text::iequals(word, "numeric")) {
        col.kind = ColumnKind::Numeric;
    } else if (text::iequals(word, "integer")) {
        col.kind = ColumnKind::Numeric;
        col.integer = true;
    } else {
        fail(line.number, "unknown type '" + std::string(word) + "' for attribute '" + col.name + "'");
    }
    auto range = text::trim(type.substr(word.size()));
    if (range.empty()) return col;
    if (range.front() != '[' || range.back() != ']') fail(line.number, "malformed range for '" + col.name + "'");
    const auto bounds = text::split_trimmed(range.substr(1, range.size() - 2), ',');
    double lo = 0, hi = 0;
    if (bounds.size() != 2 || !text::parse_double(bounds[0], lo) || !text::parse_double(bounds[1], hi))
        fail(line.number, "malformed range for '" + col.name + "'");
    col.range = std::pair{lo, hi};
    return col;
}

struct Parsed {
    KeelHeader header;
    std::size_t data_line = 0;  // index into lines of the first row after @data
};

Parsed parse_header_lines(const std::vector<Line>& lines) {
    Parsed p;
    bool have_data = false;
    std::size_t i = 0;
    for (; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.text.empty() || line.text.front() == '%') continue;
        if (line.text.front() != '@') fail(line.number, "expected a header keyword before @data");
        const auto word = keyword_of(line.text);
        const auto rest = text::trim(line.text.substr(word.size()));
        if (text::iequals(word, "@relation")) {
            p.header.relation = std::string(rest);
        } else if (text::iequals(word, "@attribute")) {
            p.header.attributes.push_back(parse_attribute(line, rest));
        } else if (text::iequals(word, "@inputs") || text::iequals(word, "@input")) {
            p.header.inputs = name_list(rest);
        } else if (text::iequals(word, "@outputs") || text::iequals(word, "@output")) {
            p.header.outputs = name_list(rest);
        } else if (text::iequals(word, "@data")) {
            have_data = true;
            ++i;
            break;
        } else {
            fail(line.number, "unknown header keyword '" + std::string(word) + "'");
        }
    }
    if (!have_data) throw ParseError("missing @data section");
    if (p.header.attributes.empty()) throw ParseError("no @attribute declarations");

    auto& attrs = p.header.attributes;
    auto find = [&](const std::string& name) {
        const auto it = std::find_if(attrs.begin(), attrs.end(), [&](const ColumnSpec& c) { return c.name == name; });
        if (it == attrs.end()) throw ParseError("'" + name + "' is listed in @inputs/@outputs but not declared");
        return static_cast<std::size_t>(it - attrs.begin());
    };
    if (p.header.outputs.empty()) p.header.outputs = {attrs.back().name};
    if (p.header.outputs.size() != 1) throw ParseError("exactly one @outputs attribute is supported");
    const auto cls = find(p.header.outputs.front());
    if (attrs[cls].kind == ColumnKind::Numeric)
        throw ParseError("output attribute '" + attrs[cls].name + "' must be nominal");
    attrs[cls].kind = ColumnKind::Class;
    if (p.header.inputs.empty()) {
        for (std::size_t c = 0; c < attrs.size(); ++c)
            if (c != cls) p.header.inputs.push_back(attrs[c].name);
    }
    for (const auto& n : p.header.inputs) {
        if (find(n) == cls) throw ParseError("'" + n + "' is both an input and the output");
    }
    p.data_line = i;
    return p;
}

}  // namespace

KeelHeader parse_keel_header(std::string_view text) { return parse_header_lines(split_lines(text)).header; }

RawTable parse_keel(std::string_view text) {
    const auto lines = split_lines(text);
    const auto parsed = parse_header_lines(lines);
    const auto& attrs = parsed.header.attributes;

    std::vector<bool> keep(attrs.size(), false);
    for (std::size_t c = 0; c < attrs.size(); ++c) {
        keep[c] = attrs[c].kind == ColumnKind::Class ||
                  std::find(parsed.header.inputs.begin(), parsed.header.inputs.end(), attrs[c].name) !=
                      parsed.header.inputs.end();
    }

    RawTable table;
    table.relation = parsed.header.relation;
    for (std::size_t c = 0; c < attrs.size(); ++c)
        if (keep[c]) table.columns.push_back(attrs[c]);

    std::size_t row_index = 0;
    for (std::size_t i = parsed.data_line; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.text.empty() || line.text.front() == '%') continue;
        ++row_index;
        const auto cells = text::split_trimmed(line.text, ',');
        if (cells.size() != attrs.size()) {
            fail(line.number, "row " + std::to_string(row_index) + " has " + std::to_string(cells.size()) +
                                  " cells, expected " + std::to_string(attrs.size()));
        }
        std::vector<Cell> row;
        row.reserve(table.columns.size());
        for (std::size_t c = 0; c < attrs.size(); ++c) {
            if (!keep[c]) continue;
            const auto& cell = cells[c];
            if (cell == "?" || text::iequals(cell, "<null>")) {
                fail(line.number, "row " + std::to_string(row_index) + ": missing value in column '" +
                                      attrs[c].name + "'");
            }
            if (attrs[c].kind == ColumnKind::Numeric) {
                double v = 0;
                if (!text::parse_double(cell, v)) {
                    fail(line.number, "row " + std::to_string(row_index) + ": column '" + attrs[c].name +
                                          "' holds '" + cell + "', not a number");
                }
                row.emplace_back(v);
            } else {
                row.emplace_back(cell);
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

std::string cell_text(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return text::shortest(*d);
    return std::get<std::string>(cell);
}

}  // namespace

std::string write_keel(const RawTable& table) {
    std::string out = "@relation " + table.relation + "\n";
    std::vector<std::string> inputs;
    std::string output;
    for (const auto& col : table.columns) {
        out += "@attribute " + col.name;
        if (col.kind == ColumnKind::Numeric) {
            out += col.integer ? " integer" : " real";
            if (col.range) out += " [" + text::shortest(col.range->first) + ", " + text::shortest(col.range->second) + "]";
        } else {
            out += " {";
            for (std::size_t v = 0; v < col.values.size(); ++v) out += (v ? ", " : "") + col.values[v];
            out += "}";
        }
        out += "\n";
        if (col.kind == ColumnKind::Class) output = col.name;
        else inputs.push_back(col.name);
    }
    out += "@inputs ";
    for (std::size_t i = 0; i < inputs.size(); ++i) out += (i ? ", " : "") + inputs[i];
    out += "\n@outputs " + output + "\n@data\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out += (c ? ", " : "") + cell_text(row[c]);
        out += "\n";
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path.string() + "'");
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) throw IoError("error writing '" + path.string() + "'");
}

RawTable read_keel_file(const std::filesystem::path& path) {
    try {
        return parse_keel(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string fold_file_name(std::string_view dataset, int fold, bool train, int k) {
    return std::string(dataset) + "-" + std::to_string(k) + "-" + std::to_string(fold) + (train ? "tra" : "tst") +
           ".dat";
}

namespace {

void check_same_layout(const RawTable& a, const RawTable& b, const std::string& context) {
    bool same = a.columns.size() == b.columns.size();
    for (std::size_t c = 0; same && c < a.columns.size(); ++c)
        same = a.columns[c].name == b.columns[c].name && a.columns[c].kind == b.columns[c].kind;
    if (!same) throw Error(context + ": train and test files declare different attributes");
}

void merge_vocabulary(RawTable& a, RawTable& b) {
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
        auto& va = a.columns[c].values;
        if (a.columns[c].kind == ColumnKind::Numeric) continue;
        for (const auto& v : b.columns[c].values)
            if (std::find(va.begin(), va.end(), v) == va.end()) va.push_back(v);
        b.columns[c].values = va;
    }
}

std::vector<std::string> row_keys(const RawTable& t) {
    std::vector<std::string> keys;
    keys.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        std::string key;
        for (const auto& cell : row) key += cell_text(cell) + '\x1f';
        keys.push_back(std::move(key));
    }
    return keys;
}

std::string resolve_positive(const RawTable& train, const RawTable& test, const PositiveClassRule& rule) {
    const auto cls = train.class_column();
    const auto& classes = train.columns[cls].values;
    if (rule.name) return *rule.name;
    if (std::find(classes.begin(), classes.end(), "positive") != classes.end()) return "positive";
    std::map<std::string, std::size_t> counts;
    for (const auto* t : {&train, &test})
        for (const auto& row : t->rows) ++counts[std::get<std::string>(row[cls])];
    if (classes.size() != 2) return classes.empty() ? std::string{} : classes.front();
    return counts[classes[1]] < counts[classes[0]] ? classes[1] : classes[0];
}

}  // namespace

std::vector<FoldPair> load_fold_pairs(const std::filesystem::path& directory, std::string_view dataset_name,
                                      const PositiveClassRule& rule) {
    constexpr int k = 5;
    std::vector<std::string> missing;
    for (int f = 1; f <= k; ++f) {
        for (bool train : {true, false}) {
            const auto name = fold_file_name(dataset_name, f, train, k);
            if (!std::filesystem::is_regular_file(directory / name)) missing.push_back(name);
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw IoError("dataset '" + std::string(dataset_name) + "' in '" + directory.string() +
                      "' is missing fold files: " + list);
    }

    std::vector<FoldPair> pairs;
    std::vector<std::string> whole, covered;
    std::optional<std::string> positive;
    for (int f = 1; f <= k; ++f) {
        const std::string context = std::string(dataset_name) + " fold " + std::to_string(f);
        auto train = clean_strings(read_keel_file(directory / fold_file_name(dataset_name, f, true, k)));
        auto test = clean_strings(read_keel_file(directory / fold_file_name(dataset_name, f, false, k)));
        check_same_layout(train, test, context);
        merge_vocabulary(train, test);

        auto keys = row_keys(train);
        auto test_keys = row_keys(test);
        covered.insert(covered.end(), test_keys.begin(), test_keys.end());
        keys.insert(keys.end(), test_keys.begin(), test_keys.end());
        std::sort(keys.begin(), keys.end());
        if (f == 1) whole = keys;
        else if (keys != whole) throw Error(context + ": train+test rows differ from fold 1");

        if (!positive) positive = resolve_positive(train, test, rule);
        const PositiveClassRule forced{positive};
        try {
            auto tr = one_hot_encode(train, forced, std::string(dataset_name));
            auto te = one_hot_encode(test, forced, std::string(dataset_name));
            pairs.push_back({f, std::move(tr), std::move(te)});
        } catch (const Error& e) {
            throw Error(context + ": " + e.what());
        }
    }
    std::sort(covered.begin(), covered.end());
    if (covered != whole) throw Error(std::string(dataset_name) + ": test folds do not partition the dataset");
    return pairs;
}

void write_fold_files(const std::filesystem::path& directory, std::string_view dataset_name, const RawTable& table,
                      const std::vector<int>& fold_of_row, int k) {
    if (fold_of_row.size() != table.rows.size()) throw Error("write_fold_files: fold assignment has wrong length");
    std::filesystem::create_directories(directory);
    for (int f = 0; f < k; ++f) {
        RawTable train{table.relation, table.columns, {}}, test{table.relation, table.columns, {}};
        for (std::size_t r = 0; r < table.rows.size(); ++r) (fold_of_row[r] == f ? test : train).rows.push_back(table.rows[r]);
        write_text_file(directory / fold_file_name(dataset_name, f + 1, true, k), write_keel(train));
        write_text_file(directory / fold_file_name(dataset_name, f + 1, false, k), write_keel(test));
    }
}

void sort_records(std::vector<ResultRecord>& records) {
    auto key = [](const ResultRecord& r) { return std::tie(r.dataset, r.model, r.scaler, r.fold); };
    std::sort(records.begin(), records.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    const auto dup = std::adjacent_find(records.begin(), records.end(),
                                        [&](const auto& a, const auto& b) { return key(a) == key(b); });
    if (dup != records.end()) {
        throw Error("duplicate result for (" + dup->dataset + ", " + std::to_string(dup->fold) + ", " + dup->model +
                    ", " + dup->scaler + ")");
    }
}

std::string results_csv(std::vector<ResultRecord> records) {
    if (records.empty()) throw Error("no result records to write");
    sort_records(records);
    std::string out = "dataset,fold,model,scaler,f1,gmean\n";
    for (const auto& r : records) {
        for (const auto* field : {&r.dataset, &r.model, &r.scaler}) {
            if (field->find_first_of(",\"\n\r") != std::string::npos)
                throw Error("identifier '" + *field + "' cannot be written to CSV");
        }
        if (!(r.f1 >= 0.0 && r.f1 <= 1.0 && r.gmean >= 0.0 && r.gmean <= 1.0))
            throw Error("score outside [0,1] for " + r.dataset + "/" + r.model + "/" + r.scaler);
        out += r.dataset + "," + std::to_string(r.fold) + "," + r.model + "," + r.scaler + "," +
               text::fixed(r.f1, 6) + "," + text::fixed(r.gmean, 6) + "\n";
    }
    return out;
}

void write_results_csv(const std::vector<ResultRecord>& records, const std::filesystem::path& path) {
    write_text_file(path, results_csv(records));
}

std::vector<ResultRecord> read_results_csv(const std::filesystem::path& path) {
    const auto content = read_text_file(path);
    const auto lines = split_lines(content);
    std::vector<ResultRecord> out;
    bool header = true;
    for (const auto& line : lines) {
        if (line.text.empty()) continue;
        if (header) {
            if (line.text != "dataset,fold,model,scaler,f1,gmean")
                throw ParseError(path.string() + ": unexpected results header");
            header = false;
            continue;
        }
        const auto f = text::split_trimmed(line.text, ',');
        ResultRecord r;
        double fold = 0;
        if (f.size() != 6 || !text::parse_double(f[1], fold) || !text::parse_double(f[4], r.f1) ||
            !text::parse_double(f[5], r.gmean))
            fail(line.number, "malformed results row in " + path.string());
        r.dataset = f[0];
        r.fold = static_cast<int>(fold);
        r.model = f[2];
        r.scaler = f[3];
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace scalebench
