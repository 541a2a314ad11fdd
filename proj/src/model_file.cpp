#include "lzhmm/model_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lzhmm/error.hpp"

namespace lzhmm {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ModelError(std::string("missing field '") + key + "'");
    return *it;
}

std::vector<double> parse_row(const json& row, const std::string& path, std::size_t expected) {
    if (!row.is_array()) throw ModelError(path + ": expected an array of numbers");
    if (row.size() != expected)
        throw ModelError(path + ": expected " + std::to_string(expected) + " entries, found " + std::to_string(row.size()));
    std::vector<double> out;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (!row[j].is_number()) throw ModelError(path + "[" + std::to_string(j) + "]: not a number");
        const double v = row[j].get<double>();
        if (!std::isfinite(v)) throw ModelError(path + "[" + std::to_string(j) + "]: not finite");
        if (v < 0.0) throw ModelError(path + "[" + std::to_string(j) + "]: negative probability");
        out.push_back(v);
    }
    double sum = 0.0;
    for (double v : out) sum += v;
    if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << path << ": row sums to " << sum << ", expected 1";
        throw ModelError(msg.str());
    }
    return out;
}

Matrix parse_matrix(const json& rows, const std::string& field, std::size_t nrows, std::size_t ncols) {
    if (!rows.is_array()) throw ModelError(field + ": expected an array of rows");
    if (rows.size() != nrows)
        throw ModelError(field + ": expected " + std::to_string(nrows) + " rows, found " + std::to_string(rows.size()));
    Matrix m(nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i) {
        const auto row = parse_row(rows[i], field + "[" + std::to_string(i) + "]", ncols);
        for (std::size_t j = 0; j < ncols; ++j) m(i, j) = row[j];
    }
    return m;
}

} // namespace

HiddenMarkovModel parse_model_file(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ModelError(std::string("malformed model file: ") + e.what());
    }
    if (!doc.is_object()) throw ModelError("model file must be a JSON object");

    const json& schema = require(doc, "schema");
    if (!schema.is_number_integer() || schema.get<int>() != kModelSchemaVersion)
        throw ModelError("schema: unsupported version (expected " + std::to_string(kModelSchemaVersion) + ")");

    const json& alpha = require(doc, "alphabet");
    if (!alpha.is_array()) throw ModelError("alphabet: expected an array of strings");
    std::vector<std::string> symbols;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (!alpha[i].is_string()) throw ModelError("alphabet[" + std::to_string(i) + "]: expected a string");
        symbols.push_back(alpha[i].get<std::string>());
    }
    Alphabet alphabet = [&] {
        try {
            return Alphabet(std::move(symbols));
        } catch (const ModelError& e) {
            throw ModelError(std::string("alphabet: ") + e.what());
        }
    }();

    const json& states = require(doc, "states");
    if (!states.is_number_integer() || states.get<long long>() < 1)
        throw ModelError("states: expected a positive integer");
    const auto k = static_cast<std::size_t>(states.get<long long>());

    Matrix transitions = parse_matrix(require(doc, "transitions"), "transitions", k, k);
    Matrix emissions = parse_matrix(require(doc, "emissions"), "emissions", k, alphabet.size());
    std::vector<double> initial;
    if (auto it = doc.find("initial"); it != doc.end() && !it->is_null()) initial = parse_row(*it, "initial", k);

    return HiddenMarkovModel(MarkovChain(std::move(transitions)), std::move(alphabet), std::move(emissions),
                             std::move(initial));
}

HiddenMarkovModel load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open model file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_model_file(ss.str());
    } catch (const ModelError& e) {
        throw ModelError(path.string() + ": " + e.what());
    }
}

std::string format_model_file(const HiddenMarkovModel& hmm) {
    json doc;
    doc["schema"] = kModelSchemaVersion;
    doc["alphabet"] = hmm.alphabet().symbols();
    doc["states"] = hmm.states();
    auto rows = [](const Matrix& m) {
        json out = json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
        return out;
    };
    doc["transitions"] = rows(hmm.chain().transitions());
    doc["emissions"] = rows(hmm.emissions());
    if (hmm.explicit_initial()) doc["initial"] = hmm.initial();
    return doc.dump(2) + "\n";
}

} // namespace lzhmm
