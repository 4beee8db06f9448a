#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pbda/classifier.hpp"
#include "pbda/optimizer.hpp"

namespace pbda::harness {

/// A trained classifier plus the settings needed to re-evaluate its bound.
struct ModelFile {
  BoundKind algorithm = BoundKind::dapbgd;
  double delta = 0.05;
  Classifier model;
};

std::string algorithm_name(BoundKind kind);
/// Throws DomainError for anything but "pbgd" / "dapbgd".
BoundKind parse_algorithm(const std::string& name);

/// Text format:
///
///   format=pbda-model
///   version=1
///   algorithm=dapbgd
///   representation=dual        (or primal)
///   kernel=gaussian            (dual only; gaussian or linear)
///   gamma=2                    (dual only)
///   ridge=0                    (dual only)
///   delta=0.05
///   input_dim=2
///   weights=600
///   anchors=600                (dual only)
///   [weights]
///   <one value per line>
///   [anchors]
///   <comma-separated coordinates, one anchor per line>
///
/// Numbers use 17 significant digits so a round trip is exact.
void save_model(const ModelFile& file, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

/// Header: iteration,objective,bstar,source_risk,disagreement,kl_budget,
/// source_error,step,grad_norm. PBGD rows leave `disagreement` empty.
void save_trace_csv(const std::vector<IterationRecord>& trace, const std::filesystem::path& path);

/// Shortest text form that parses back to the same double.
std::string format_shortest(double v);

}  // namespace pbda::harness
