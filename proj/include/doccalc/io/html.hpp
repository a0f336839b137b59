#pragma once

#include <string>

#include "doccalc/doc/node.hpp"

namespace doccalc::io {

// Deterministic HTML emission with the tag mapping para->p, section->section,
// bold->strong, figure->figure, list->ul, item->li; unmapped tags keep their
// name. Escapes &, <, >, " in text and attribute values.
std::string to_html(const doc::NodeTy& n);
std::string to_html(const doc::NodeList& doc);

std::string html_escape(const std::string& s);

}  // namespace doccalc::io
