#pragma once

// JSON formats for nets and PERT networks, plus the analysis report emitted
// by the command line tool. Weights and probabilities travel as strings
// ("4", "1/5", "0.25") or JSON integers, never as floats: a float literal has
// already lost the exact value this library is built around.

#include <cstdint>
#include <string>

#include <json.hpp>

#include <tpwn/errors.hpp>
#include <tpwn/expected.hpp>
#include <tpwn/net.hpp>
#include <tpwn/pert.hpp>
#include <tpwn/rational.hpp>

namespace tpwn {

namespace detail {

// line/column of a byte offset, for parse errors worth reporting precisely
inline std::pair<std::size_t, std::size_t> text_position(const std::string& text,
                                                         std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

inline nlohmann::json parse_document(const std::string& text, const char* expected_format) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        auto [line, column] = text_position(text, err.byte ? err.byte - 1 : 0);
        throw ParseError("not valid JSON at line " + std::to_string(line) + ", column " +
                             std::to_string(column),
                         line, column);
    }
    if (!doc.is_object()) throw ParseError("top level value must be an object");
    if (doc.value("format", "") != expected_format)
        throw ParseError("field 'format' must be \"" + std::string(expected_format) + "\"");
    if (!doc.contains("version") || !doc["version"].is_number_integer() ||
        doc["version"].get<std::int64_t>() != 1)
        throw ParseError("field 'version' must be the integer 1");
    return doc;
}

inline const nlohmann::json& require(const nlohmann::json& doc, const char* field) {
    auto it = doc.find(field);
    if (it == doc.end()) throw ParseError("missing field '" + std::string(field) + "'");
    return *it;
}

inline std::string require_string(const nlohmann::json& doc, const char* field) {
    const auto& value = require(doc, field);
    if (!value.is_string())
        throw ParseError("field '" + std::string(field) + "' must be a string");
    return value.get<std::string>();
}

inline std::vector<std::string> require_string_array(const nlohmann::json& doc,
                                                     const char* field) {
    const auto& value = require(doc, field);
    if (!value.is_array())
        throw ParseError("field '" + std::string(field) + "' must be an array");
    std::vector<std::string> out;
    for (const auto& entry : value) {
        if (!entry.is_string())
            throw ParseError("field '" + std::string(field) + "' must contain only strings");
        out.push_back(entry.get<std::string>());
    }
    return out;
}

// rationals arrive as strings or integers; floats are rejected, not rounded
inline Rational require_rational(const nlohmann::json& doc, const char* field,
                                 const std::string& owner) {
    const auto& value = require(doc, field);
    if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
    if (value.is_number())
        throw ParseError("field '" + std::string(field) + "' of '" + owner +
                         "' must be a string or integer, not a float literal");
    if (!value.is_string())
        throw ParseError("field '" + std::string(field) + "' of '" + owner +
                         "' must be a string or integer");
    try {
        return parse_rational(value.get<std::string>());
    } catch (const ValidationError& err) {
        throw ParseError("field '" + std::string(field) + "' of '" + owner +
                         "': " + err.what());
    }
}

}  // namespace detail

// ---- net documents ("tpwn-net", version 1) ----

inline WorkflowNet parse_net(const std::string& text) {
    auto doc = detail::parse_document(text, "tpwn-net");
    NetBuilder builder;
    for (const auto& place : detail::require_string_array(doc, "places")) builder.place(place);
    const auto& transitions = detail::require(doc, "transitions");
    if (!transitions.is_array()) throw ParseError("field 'transitions' must be an array");
    for (const auto& entry : transitions) {
        if (!entry.is_object()) throw ParseError("each transition must be an object");
        const auto id = detail::require_string(entry, "id");
        const auto& time = detail::require(entry, "time");
        if (!time.is_number_integer() || time.get<std::int64_t>() < 0)
            throw ParseError("field 'time' of '" + id + "' must be a non-negative integer");
        builder.transition(id, detail::require_string_array(entry, "pre"),
                           detail::require_string_array(entry, "post"),
                           detail::require_rational(entry, "weight", id),
                           time.get<std::int64_t>());
    }
    return builder.build(detail::require_string(doc, "initial"),
                         detail::require_string(doc, "final"));
}

inline std::string emit_net(const WorkflowNet& net) {
    nlohmann::json doc;
    doc["format"] = "tpwn-net";
    doc["version"] = 1;
    doc["places"] = net.places;
    doc["transitions"] = nlohmann::json::array();
    for (const auto& t : net.transitions) {
        nlohmann::json entry;
        entry["id"] = t.name;
        entry["pre"] = nlohmann::json::array();
        for (auto p : t.pre_places) entry["pre"].push_back(net.places[p]);
        entry["post"] = nlohmann::json::array();
        for (auto p : t.post_places) entry["post"].push_back(net.places[p]);
        entry["weight"] = to_fraction_string(t.weight);
        entry["time"] = t.duration;
        doc["transitions"].push_back(std::move(entry));
    }
    doc["initial"] = net.places[net.initial];
    doc["final"] = net.places[net.final];
    return doc.dump(2) + "\n";
}

// ---- PERT documents ("tpwn-pert", version 1) ----

inline PertNetwork parse_pert(const std::string& text) {
    auto doc = detail::parse_document(text, "tpwn-pert");
    PertNetwork pn;
    pn.vertices = detail::require_string_array(doc, "vertices");
    pn.source = detail::require_string(doc, "source");
    pn.sink = detail::require_string(doc, "sink");
    const auto& edges = detail::require(doc, "edges");
    if (!edges.is_array()) throw ParseError("field 'edges' must be an array");
    for (const auto& entry : edges) {
        if (!entry.is_object()) throw ParseError("each edge must be an object");
        const auto id = detail::require_string(entry, "id");
        pn.edges.push_back({id, detail::require_string(entry, "from"),
                            detail::require_string(entry, "to"),
                            detail::require_rational(entry, "p", id)});
    }
    return pn;
}

inline std::string emit_pert(const PertNetwork& pn) {
    nlohmann::json doc;
    doc["format"] = "tpwn-pert";
    doc["version"] = 1;
    doc["vertices"] = pn.vertices;
    doc["source"] = pn.source;
    doc["sink"] = pn.sink;
    doc["edges"] = nlohmann::json::array();
    for (const auto& e : pn.edges) {
        nlohmann::json entry;
        entry["id"] = e.id;
        entry["from"] = e.from;
        entry["to"] = e.to;
        entry["p"] = to_fraction_string(e.prob);
        doc["edges"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

// ---- analysis report ----

inline nlohmann::json structural_report_json(const StructuralReport& report) {
    nlohmann::json out;
    out["workflow_shape"] = report.workflow_shape;
    if (!report.workflow_shape) out["shape_reason"] = report.shape_reason;
    out["one_safe"] = report.one_safe;
    if (report.unsafe_place) out["unsafe_place"] = *report.unsafe_place;
    if (report.unsafe_trace) out["unsafe_trace"] = *report.unsafe_trace;
    out["free_choice"] = report.free_choice;
    if (!report.free_choice) out["free_choice_witness"] = report.free_choice_witness;
    if (report.confusion_free) out["confusion_free"] = *report.confusion_free;
    if (report.sound) out["sound"] = *report.sound;
    out["markings"] = report.marking_count;
    return out;
}

inline nlohmann::json analysis_report_json(const WorkflowNet& net,
                                           const ExpectedTimeResult& result) {
    nlohmann::json out;
    out["net"] = {{"places", net.place_count()}, {"transitions", net.transitions.size()}};
    out["infinite"] = result.infinite;
    if (!result.infinite) {
        out["expected_time"] = {{"rational", to_fraction_string(result.value)},
                                {"decimal", to_decimal_string(result.value)}};
        out["chain_states"] = result.chain_states;
    }
    out["timings"] = {{"construction_ms", result.build_ms}, {"solving_ms", result.solve_ms}};
    if (result.report) out["structural"] = structural_report_json(*result.report);
    return out;
}

}  // namespace tpwn
