#include "spamtree/arff.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "spamtree/numformat.hpp"

namespace spamtree {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool starts_with_keyword(const std::string& line, const std::string& kw, std::string& rest) {
    if (line.size() < kw.size() || lower(line.substr(0, kw.size())) != kw) return false;
    if (line.size() > kw.size() && !std::isspace(static_cast<unsigned char>(line[kw.size()])) &&
        line[kw.size()] != '{')
        return false;
    rest = trim(line.substr(kw.size()));
    return true;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_number(const std::string& tok, std::size_t line_no, const std::string& what) {
    if (tok.empty()) throw ParseError("empty " + what, line_no);
    const char* begin = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + tok.size())
        throw ParseError("bad numeric value '" + tok + "' in " + what, line_no);
    return v;
}

// Attribute name, optionally in single or double quotes; returns the rest.
std::string take_name(const std::string& s, std::size_t line_no, std::string& rest) {
    if (s.empty()) throw ParseError("missing attribute name", line_no);
    if (s[0] == '\'' || s[0] == '"') {
        std::size_t close = s.find(s[0], 1);
        if (close == std::string::npos)
            throw ParseError("unterminated quote in attribute name", line_no);
        rest = trim(s.substr(close + 1));
        return s.substr(1, close - 1);
    }
    std::size_t sp = s.find_first_of(" \t{");
    if (sp == std::string::npos) throw ParseError("missing attribute type", line_no);
    rest = trim(s.substr(sp));
    return s.substr(0, sp);
}

bool needs_quoting(const std::string& name) {
    if (name.empty()) return true;
    return name.find_first_of(" \t,{}%'\"") != std::string::npos;
}

}  // namespace

const char* const kSpambaseAttributeNames[57] = {
    "word_freq_make", "word_freq_address", "word_freq_all", "word_freq_3d",
    "word_freq_our", "word_freq_over", "word_freq_remove", "word_freq_internet",
    "word_freq_order", "word_freq_mail", "word_freq_receive", "word_freq_will",
    "word_freq_people", "word_freq_report", "word_freq_addresses", "word_freq_free",
    "word_freq_business", "word_freq_email", "word_freq_you", "word_freq_credit",
    "word_freq_your", "word_freq_font", "word_freq_000", "word_freq_money",
    "word_freq_hp", "word_freq_hpl", "word_freq_george", "word_freq_650",
    "word_freq_lab", "word_freq_labs", "word_freq_telnet", "word_freq_857",
    "word_freq_data", "word_freq_415", "word_freq_85", "word_freq_technology",
    "word_freq_1999", "word_freq_parts", "word_freq_pm", "word_freq_direct",
    "word_freq_cs", "word_freq_meeting", "word_freq_original", "word_freq_project",
    "word_freq_re", "word_freq_edu", "word_freq_table", "word_freq_conference",
    "char_freq_;", "char_freq_(", "char_freq_[", "char_freq_!",
    "char_freq_$", "char_freq_#", "capital_run_length_average",
    "capital_run_length_longest", "capital_run_length_total"};

Dataset parse_arff(std::istream& in) {
    Dataset ds;
    std::vector<std::size_t> attr_lines;
    std::string line;
    std::size_t line_no = 0;
    bool saw_relation = false, in_data = false;

    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;

        if (!in_data) {
            std::string rest;
            if (starts_with_keyword(t, "@relation", rest)) {
                if (saw_relation) throw ParseError("duplicate @relation", line_no);
                if (rest.empty()) throw ParseError("missing relation name", line_no);
                if (rest.size() >= 2 && (rest.front() == '\'' || rest.front() == '"') &&
                    rest.back() == rest.front())
                    rest = rest.substr(1, rest.size() - 2);
                ds.relation = rest;
                saw_relation = true;
            } else if (starts_with_keyword(t, "@attribute", rest)) {
                if (!saw_relation) throw ParseError("@attribute before @relation", line_no);
                AttributeSpec spec;
                std::string type;
                spec.name = take_name(rest, line_no, type);
                if (spec.name.empty()) throw ParseError("empty attribute name", line_no);
                for (const auto& prev : ds.schema)
                    if (prev.name == spec.name)
                        throw ParseError("duplicate attribute name '" + spec.name + "'", line_no);
                if (type.empty()) throw ParseError("missing attribute type", line_no);
                if (type[0] == '{') {
                    if (type.back() != '}')
                        throw ParseError("unterminated nominal label list", line_no);
                    spec.kind = AttributeKind::nominal;
                    for (auto& label : split_fields(type.substr(1, type.size() - 2))) {
                        if (label.empty())
                            throw ParseError("empty nominal label", line_no);
                        spec.labels.push_back(label);
                    }
                } else {
                    std::string lt = lower(type);
                    if (lt != "numeric" && lt != "real" && lt != "integer")
                        throw ParseError("unsupported attribute type '" + type + "'", line_no);
                    spec.kind = AttributeKind::numeric;
                }
                ds.schema.push_back(std::move(spec));
                attr_lines.push_back(line_no);
            } else if (starts_with_keyword(t, "@data", rest)) {
                if (!rest.empty()) throw ParseError("unexpected text after @data", line_no);
                if (ds.schema.size() < 2)
                    throw ParseError("need at least one feature and a class attribute", line_no);
                for (std::size_t i = 0; i + 1 < ds.schema.size(); ++i)
                    if (ds.schema[i].kind == AttributeKind::nominal)
                        throw ParseError("nominal feature attribute '" + ds.schema[i].name +
                                             "' not supported",
                                         attr_lines[i]);
                const AttributeSpec& cls = ds.schema.back();
                if (cls.kind != AttributeKind::nominal || cls.labels.size() != 2)
                    throw ParseError("class attribute '" + cls.name +
                                         "' must be nominal with two labels",
                                     attr_lines.back());
                in_data = true;
            } else {
                throw ParseError("expected @relation, @attribute, or @data", line_no);
            }
            continue;
        }

        if (t[0] == '@') throw ParseError("declaration after @data", line_no);
        auto fields = split_fields(t);
        if (fields.size() != ds.schema.size())
            throw ParseError("expected " + std::to_string(ds.schema.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        Instance inst;
        inst.values.reserve(ds.feature_count());
        for (std::size_t i = 0; i + 1 < fields.size(); ++i)
            inst.values.push_back(
                parse_number(fields[i], line_no, "attribute '" + ds.schema[i].name + "'"));
        const auto& labels = ds.schema.back().labels;
        const std::string& cls = fields.back();
        if (cls == labels[0])
            inst.class_label = 0;
        else if (cls == labels[1])
            inst.class_label = 1;
        else
            throw ParseError("class value '" + cls + "' is not one of the declared labels",
                             line_no);
        ds.instances.push_back(std::move(inst));
    }

    if (!saw_relation) throw ParseError("missing @relation", line_no ? line_no : 1);
    if (!in_data) throw ParseError("missing @data", line_no ? line_no : 1);
    return ds;
}

Dataset parse_arff_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_arff(in);
}

std::string serialize_arff(const Dataset& ds) {
    std::ostringstream out;
    out << "@relation " << ds.relation << "\n\n";
    for (const auto& spec : ds.schema) {
        out << "@attribute ";
        if (needs_quoting(spec.name))
            out << '\'' << spec.name << '\'';
        else
            out << spec.name;
        if (spec.kind == AttributeKind::numeric) {
            out << " numeric\n";
        } else {
            out << " {";
            for (std::size_t i = 0; i < spec.labels.size(); ++i)
                out << (i ? "," : "") << spec.labels[i];
            out << "}\n";
        }
    }
    out << "\n@data\n";
    for (const auto& inst : ds.instances) {
        for (double v : inst.values) out << shortest_decimal(v) << ',';
        out << ds.schema.back().labels[inst.class_label] << '\n';
    }
    return out.str();
}

Dataset parse_spambase_csv(std::istream& in) {
    Dataset ds;
    ds.relation = "spambase";
    for (const char* name : kSpambaseAttributeNames)
        ds.schema.push_back({name, AttributeKind::numeric, {}});
    ds.schema.push_back({"class", AttributeKind::nominal, {"0", "1"}});

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty()) continue;
        auto fields = split_fields(t);
        if (fields.size() != 58)
            throw ParseError("expected 58 fields, got " + std::to_string(fields.size()), line_no);
        Instance inst;
        inst.values.reserve(57);
        for (std::size_t i = 0; i < 57; ++i)
            inst.values.push_back(
                parse_number(fields[i], line_no,
                             std::string("attribute '") + kSpambaseAttributeNames[i] + "'"));
        double cls = parse_number(fields[57], line_no, "class column");
        if (cls != 0.0 && cls != 1.0)
            throw ParseError("class column must be 0 or 1, got '" + fields[57] + "'", line_no);
        inst.class_label = static_cast<int>(cls);
        ds.instances.push_back(std::move(inst));
    }
    return ds;
}

Dataset parse_spambase_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_spambase_csv(in);
}

}  // namespace spamtree
