#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sampro/design.hpp"
#include "sampro/metrics.hpp"
#include "sampro/project.hpp"
#include "sampro/subsample.hpp"

namespace sampro {

nlohmann::json design_to_json(const DesignMeasure& design);
DesignMeasure design_from_json(const nlohmann::json& j, CandidateSetPtr candidates);

nlohmann::json multiset_to_json(const SampleMultiset& x_set);
SampleMultiset multiset_from_json(const nlohmann::json& j, CandidateSetPtr candidates);

nlohmann::json certificate_to_json(const DesignCertificate& cert);
nlohmann::json subsample_report_to_json(const SubsampleReport& report);

nlohmann::json projection_to_json(const ProjectionOperator& op);
ProjectionOperator projection_from_json(const nlohmann::json& j, const EvalMatrix& eval);

nlohmann::json report_to_json(const VerificationReport& report);
std::string report_to_text(const VerificationReport& report);

// Map keys for Lp entries: "inf" or the shortest decimal form.
std::string p_key(double p);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
void write_csv(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<Eigen::VectorXd>& columns);

}  // namespace sampro
