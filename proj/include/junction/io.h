#ifndef JUNCTION_IO_H
#define JUNCTION_IO_H

#include "junction/model.h"
#include "junction/optimizer.h"

#include <string>

namespace junction {

/*
 * Scenario files are JSON objects keyed by ScenarioConfig field names.
 * lambda_x / lambda_y are per km and t_threshold is in dB in the file.
 * Missing keys keep the defaults.  Throws ValidationError.
 */
ScenarioConfig load_scenario (const std::string &path);
ScenarioConfig parse_scenario (const std::string &json_text);
std::string scenario_to_json (const ScenarioConfig &cfg);

std::string table_to_json (const RateTable &t);
RateTable table_from_json (const std::string &json_text);

} // namespace junction

#endif
