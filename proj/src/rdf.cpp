#include "spamtree/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "spamtree/dataset.hpp"

namespace spamtree {

void OntologyGraph::add(Triple t) {
    if (contains(t))
        throw GraphError("duplicate triple (" + t.subject + ", " + t.predicate + ", " +
                         t.object + ")");
    triples_.push_back(std::move(t));
}

bool OntologyGraph::contains(const Triple& t) const {
    return std::find(triples_.begin(), triples_.end(), t) != triples_.end();
}

bool OntologyGraph::operator==(const OntologyGraph& other) const {
    if (triples_.size() != other.triples_.size()) return false;
    auto a = triples_, b = other.triples_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

bool valid_xml_name(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
            return false;
    return true;
}

}  // namespace

std::string serialize_rdfxml(const OntologyGraph& g) {
    // group triples by subject, subjects in first-appearance order
    std::vector<std::string> order;
    std::map<std::string, std::vector<const Triple*>> by_subject;
    for (const Triple& t : g.triples()) {
        auto [it, fresh] = by_subject.try_emplace(t.subject);
        if (fresh) order.push_back(t.subject);
        it->second.push_back(&t);
    }

    std::ostringstream out;
    out << "<rdf:RDF\n"
        << "  xmlns:rdf=\"" << kRdfNamespace << "\"\n"
        << "  xmlns:" << kRelationPrefix << "=\"" << kRelationNamespace << "\">\n";
    for (const std::string& subject : order) {
        out << "  <rdf:Description rdf:about=\"" << xml_escape(subject) << "\">\n";
        for (const Triple* t : by_subject[subject]) {
            const std::string& pred = t->predicate;
            std::string ns = kRelationNamespace;
            if (pred.rfind(ns, 0) != 0)
                throw GraphError("predicate '" + pred + "' outside the relation namespace");
            std::string local = pred.substr(ns.size());
            if (!valid_xml_name(local))
                throw GraphError("predicate local name '" + local + "' is not XML-safe");
            if (t->object_is_resource)
                out << "    <" << kRelationPrefix << ':' << local << " rdf:resource=\""
                    << xml_escape(t->object) << "\"/>\n";
            else
                out << "    <" << kRelationPrefix << ':' << local << '>'
                    << xml_escape(t->object) << "</" << kRelationPrefix << ':' << local
                    << ">\n";
        }
        out << "  </rdf:Description>\n";
    }
    out << "</rdf:RDF>\n";
    return out.str();
}

namespace {

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;
    std::size_t line = 1;

    bool eof() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }
    char take() {
        char c = s[pos++];
        if (c == '\n') ++line;
        return c;
    }
    bool has(const char* lit) const {
        return s.compare(pos, std::char_traits<char>::length(lit), lit) == 0;
    }
    void expect(const char* lit, const std::string& what) {
        if (!has(lit)) fail("expected " + what);
        for (std::size_t i = 0; lit[i]; ++i) take();
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line); }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) take();
    }

    // whitespace, comments, and (at most once, at the front) an XML declaration
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (has("<!--")) {
                while (!eof() && !has("-->")) take();
                expect("-->", "end of comment");
            } else if (has("<?")) {
                while (!eof() && !has("?>")) take();
                expect("?>", "end of XML declaration");
            } else {
                return;
            }
        }
    }

    std::string name_token() {
        std::size_t start = pos;
        while (!eof()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c)) || c == '>' || c == '/' ||
                c == '=' || c == '<')
                break;
            take();
        }
        if (pos == start) fail("expected a name");
        return s.substr(start, pos - start);
    }

    std::string decode_entities(const std::string& raw) {
        std::string out;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out += raw[i];
                continue;
            }
            std::size_t semi = raw.find(';', i);
            if (semi == std::string::npos) fail("unterminated entity reference");
            std::string ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "amp") out += '&';
            else if (ent == "lt") out += '<';
            else if (ent == "gt") out += '>';
            else if (ent == "quot") out += '"';
            else if (ent == "apos") out += '\'';
            else if (!ent.empty() && ent[0] == '#') {
                int code = 0;
                try {
                    code = ent[1] == 'x' || ent[1] == 'X'
                               ? std::stoi(ent.substr(2), nullptr, 16)
                               : std::stoi(ent.substr(1));
                } catch (...) {
                    fail("bad character reference '&" + ent + ";'");
                }
                if (code <= 0 || code > 127)
                    fail("unsupported character reference '&" + ent + ";'");
                out += static_cast<char>(code);
            } else {
                fail("unknown entity '&" + ent + ";'");
            }
            i = semi;
        }
        return out;
    }

    std::string attr_value() {
        skip_ws();
        expect("=", "'=' after attribute name");
        skip_ws();
        if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
        char quote = take();
        std::string raw;
        while (!eof() && peek() != quote) {
            if (peek() == '<') fail("'<' inside attribute value");
            raw += take();
        }
        if (eof()) fail("unterminated attribute value");
        take();
        return decode_entities(raw);
    }
};

struct TagHead {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    bool self_closing = false;
};

TagHead parse_tag_head(Cursor& cur) {
    TagHead tag;
    tag.name = cur.name_token();
    for (;;) {
        cur.skip_ws();
        if (cur.eof()) cur.fail("unterminated tag <" + tag.name + ">");
        if (cur.has("/>")) {
            cur.expect("/>", "'/>'");
            tag.self_closing = true;
            return tag;
        }
        if (cur.peek() == '>') {
            cur.take();
            return tag;
        }
        std::string name = cur.name_token();
        tag.attrs.emplace_back(name, cur.attr_value());
    }
}

struct NamespaceTable {
    std::map<std::string, std::string> prefix_to_ns;

    std::string resolve(Cursor& cur, const std::string& qname) const {
        std::size_t colon = qname.find(':');
        if (colon == std::string::npos)
            cur.fail("name '" + qname + "' has no namespace prefix");
        auto it = prefix_to_ns.find(qname.substr(0, colon));
        if (it == prefix_to_ns.end())
            cur.fail("unknown namespace prefix in '" + qname + "'");
        return it->second + qname.substr(colon + 1);
    }
};

}  // namespace

OntologyGraph parse_rdfxml(const std::string& text) {
    Cursor cur{text};
    OntologyGraph g;

    cur.skip_misc();
    if (cur.eof()) cur.fail("empty document");
    cur.expect("<", "root element");
    TagHead root = parse_tag_head(cur);

    NamespaceTable ns;
    for (const auto& [name, value] : root.attrs) {
        if (name.rfind("xmlns:", 0) == 0)
            ns.prefix_to_ns[name.substr(6)] = value;
        else
            cur.fail("unexpected attribute '" + name + "' on root element");
    }
    if (ns.resolve(cur, root.name) != std::string(kRdfNamespace) + "RDF")
        cur.fail("root element must be RDF in the rdf namespace");
    if (root.self_closing) return g;

    const std::string rdf_about = std::string(kRdfNamespace) + "about";
    const std::string rdf_resource = std::string(kRdfNamespace) + "resource";

    for (;;) {
        cur.skip_misc();
        if (cur.eof()) cur.fail("unterminated root element");
        if (cur.has("</")) break;
        cur.expect("<", "Description element");
        std::size_t desc_line = cur.line;
        TagHead desc = parse_tag_head(cur);
        if (ns.resolve(cur, desc.name) != std::string(kRdfNamespace) + "Description")
            throw ParseError("expected an rdf Description element, got '" + desc.name + "'",
                             desc_line);
        std::string subject;
        bool have_about = false;
        for (const auto& [name, value] : desc.attrs) {
            if (ns.resolve(cur, name) == rdf_about) {
                subject = value;
                have_about = true;
            } else {
                throw ParseError("unexpected attribute '" + name + "' on Description",
                                 desc_line);
            }
        }
        if (!have_about) throw ParseError("Description without rdf:about", desc_line);
        if (desc.self_closing) continue;

        for (;;) {
            cur.skip_misc();
            if (cur.eof()) cur.fail("unterminated Description element");
            if (cur.has("</")) {
                cur.expect("</", "closing tag");
                std::string close = cur.name_token();
                if (close != desc.name)
                    cur.fail("mismatched closing tag '" + close + "', expected '" + desc.name +
                             "'");
                cur.skip_ws();
                cur.expect(">", "'>'");
                break;
            }
            cur.expect("<", "property element");
            std::size_t prop_line = cur.line;
            TagHead prop = parse_tag_head(cur);
            std::string predicate = ns.resolve(cur, prop.name);
            std::string resource;
            bool is_resource = false;
            for (const auto& [name, value] : prop.attrs) {
                if (ns.resolve(cur, name) == rdf_resource) {
                    resource = value;
                    is_resource = true;
                } else {
                    throw ParseError("unexpected attribute '" + name + "' on property element",
                                     prop_line);
                }
            }
            std::string literal;
            if (!prop.self_closing) {
                std::string raw;
                while (!cur.eof() && cur.peek() != '<') raw += cur.take();
                if (cur.eof()) cur.fail("unterminated property element");
                literal = cur.decode_entities(raw);
                cur.expect("</", "closing tag");
                std::string close = cur.name_token();
                if (close != prop.name)
                    cur.fail("mismatched closing tag '" + close + "', expected '" + prop.name +
                             "'");
                cur.skip_ws();
                cur.expect(">", "'>'");
            }
            Triple t;
            t.subject = subject;
            t.predicate = predicate;
            if (is_resource) {
                std::string stripped = literal;
                stripped.erase(std::remove_if(stripped.begin(), stripped.end(),
                                              [](unsigned char c) { return std::isspace(c); }),
                               stripped.end());
                if (!stripped.empty())
                    throw ParseError("property with rdf:resource cannot carry text", prop_line);
                t.object = resource;
                t.object_is_resource = true;
            } else {
                t.object = literal;
            }
            try {
                g.add(std::move(t));
            } catch (const GraphError& e) {
                throw ParseError(e.what(), prop_line);
            }
        }
    }

    cur.expect("</", "closing root tag");
    std::string close = cur.name_token();
    if (close != root.name)
        cur.fail("mismatched closing tag '" + close + "', expected '" + root.name + "'");
    cur.skip_ws();
    cur.expect(">", "'>'");
    cur.skip_misc();
    if (!cur.eof()) cur.fail("trailing content after the root element");
    return g;
}

OntologyGraph parse_rdfxml(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_rdfxml(buf.str());
}

OntologyGraph parse_rdfxml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_rdfxml(in);
}

}  // namespace spamtree
