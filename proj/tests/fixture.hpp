// Shared test helpers: the CP¹ preset loaded once per process.
#pragma once

#include "qgeom/connection.hpp"

#include <gtest/gtest.h>

#include <memory>
#include <string>

namespace qgeom::test {

inline const char *preset_path() { return QGEOM_TEST_PRESET; }

inline const Calculus &cp1() {
    static std::unique_ptr<Calculus> c = std::make_unique<Calculus>(load_preset_file(preset_path()));
    return *c;
}

inline const BaseMetrics &cp1_metrics() {
    static BaseMetrics b = base_metrics(cp1());
    return b;
}

inline Scalar S(const char *text) { return Scalar::parse(text); }

inline Word W(std::initializer_list<int> idx) {
    Word w;
    for (int k : idx) w.push_back(char(k));
    return w;
}

inline std::string failures(const Report &r) {
    std::string s;
    for (auto &ch : r.checks)
        if (!ch.passed()) s += ch.name + " [" + ch.witness.substr(0, 200) + "]\n";
    return s;
}

} // namespace qgeom::test
