#include "condorcet/ingest.hpp"

#include "condorcet/csv.hpp"
#include "condorcet/rng.hpp"
#include "condorcet/simulate.hpp"

#include <cmath>
#include <fstream>

namespace condorcet {

namespace {

[[noreturn]] void schema_error(std::size_t line, const std::string& what) {
    throw DomainError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

Dataset parse_predictions(std::istream& in, const LabelSpace& labels) {
    CsvReader reader(in);
    auto header = reader.next();
    if (!header) schema_error(1, "missing header row");

    const auto& h = *header;
    std::size_t col = 0;
    if (h.size() <= col || h[col] != "id") schema_error(1, "first column must be 'id'");
    ++col;
    const bool has_date = h.size() > col && h[col] == "date";
    if (has_date) ++col;
    if (h.size() <= col || h[col] != "true_label")
        schema_error(1, "missing 'true_label' column");
    ++col;
    const std::size_t first_model = col;
    std::vector<std::string> models(h.begin() + static_cast<std::ptrdiff_t>(first_model), h.end());
    if (models.empty()) schema_error(1, "no model columns");

    Dataset data(labels, models, has_date);
    while (auto row = reader.next()) {
        const std::size_t line = reader.line();
        if (row->size() == 1 && row->front().empty()) continue;  // blank line
        if (row->size() != h.size())
            schema_error(line, "expected " + std::to_string(h.size()) + " fields, found " +
                                   std::to_string(row->size()));
        PredictionRecord rec;
        rec.id = (*row)[0];
        if (rec.id.empty()) schema_error(line, "empty id");
        if (has_date) rec.date = (*row)[1];
        const auto& truth = (*row)[first_model - 1];
        auto t = labels.find(truth);
        if (!t) schema_error(line, "unknown label '" + truth + "' in column true_label");
        rec.truth = *t;
        for (std::size_t m = 0; m < models.size(); ++m) {
            const auto& cell = (*row)[first_model + m];
            if (cell.empty()) {
                rec.predictions.push_back(kMissing);
                continue;
            }
            auto p = labels.find(cell);
            if (!p) schema_error(line, "unknown label '" + cell + "' in column " + models[m]);
            rec.predictions.push_back(*p);
        }
        try {
            data.add(std::move(rec));
        } catch (const DomainError& e) {
            schema_error(line, e.what());
        }
    }
    return data;
}

Dataset read_predictions(const std::filesystem::path& path, const LabelSpace& labels) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return parse_predictions(in, labels);
    } catch (const DomainError& e) {
        throw DomainError(path.string() + ": " + e.what());
    }
}

void write_predictions(std::ostream& out, const Dataset& data) {
    std::vector<std::string> fields{"id"};
    if (data.has_date()) fields.emplace_back("date");
    fields.emplace_back("true_label");
    fields.insert(fields.end(), data.models().begin(), data.models().end());
    write_csv_row(out, fields);

    const auto& labels = data.labels();
    for (const auto& rec : data.records()) {
        fields.clear();
        fields.push_back(rec.id);
        if (data.has_date()) fields.push_back(*rec.date);
        fields.push_back(labels.name(rec.truth));
        for (Label p : rec.predictions) fields.push_back(p == kMissing ? std::string() : labels.name(p));
        write_csv_row(out, fields);
    }
}

void write_predictions(const std::filesystem::path& path, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    write_predictions(out, data);
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Dataset generate_synthetic(const SyntheticOptions& options) {
    const int k = options.labels.size();
    if (options.class_probs.size() != static_cast<std::size_t>(k))
        throw DomainError("class_probs needs " + std::to_string(k) + " entries");
    double total = 0.0;
    for (double p : options.class_probs) {
        if (!(p >= 0.0)) throw DomainError("class probabilities must be non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("class probabilities must sum to 1");
    if (options.models.empty()) throw DomainError("at least one model is required");

    std::vector<std::string> names;
    std::vector<double> advantages;
    for (const auto& m : options.models) {
        names.push_back(m.name);
        advantages.push_back(m.advantage);
    }
    const EnsembleSampler sampler(k, advantages, options.rho);

    std::vector<double> cdf;
    double acc = 0.0;
    for (double p : options.class_probs) cdf.push_back(acc += p);
    cdf.back() = 1.0;

    const std::uint64_t stream_seed = derive_seed(options.seed, kGenerateTag);
    Dataset data(options.labels, names, false);
    std::vector<Label> votes(names.size());
    for (std::size_t r = 0; r < options.rows; ++r) {
        CounterRng rng(stream_seed, r);
        const double u = rng.uniform();
        Label truth = 1;
        while (truth < k && u >= cdf[static_cast<std::size_t>(truth - 1)]) ++truth;

        sampler.sample(rng, votes);
        PredictionRecord rec;
        rec.id = std::to_string(r + 1);
        rec.truth = truth;
        rec.predictions.reserve(votes.size());
        // canonical k -> truth; canonical j < k -> j-th label other than truth
        for (Label v : votes) rec.predictions.push_back(v == k ? truth : (v < truth ? v : v + 1));
        data.add(std::move(rec));
    }
    return data;
}

}  // namespace condorcet
