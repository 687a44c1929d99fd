#ifndef CONVGEOM_IO_HPP
#define CONVGEOM_IO_HPP

#include <json.hpp>
#include <string>

#include "convgeom/calculus.hpp"
#include "convgeom/characterize.hpp"
#include "convgeom/convolution.hpp"
#include "convgeom/curvature.hpp"
#include "convgeom/volume.hpp"

namespace convgeom {

using nlohmann::json;

// Body-spec wire format:
//   {"kind":"ellipsoid","q":[[..],[..]]}
//   {"kind":"pball","p":4,"scale":[1,1]}
//   {"kind":"polygon","vertices":[[x,y],...]}
//   {"kind":"halfspaces","a":[[..]],"b":[..]}
//   {"kind":"linear","m":[[..]],"inner":{...}}
BodyPtr body_from_json(const json& j);
json body_to_json(const Body& body);
BodyPtr load_body_file(const std::string& path);

json to_json(const VolumeEstimate& est);
json to_json(const OneSidedDerivatives& d);
json to_json(const GradientResult& g);
json hessian_to_json(const Mat& h);
json to_json(const RadialProfile& p);
json to_json(const FlatnessReport& r);
json to_json(const HomothetyCheck& c);
json to_json(const CurvatureReport& r);
json to_json(const ShellSpreadReport& r);
json to_json(const HomothetyNecessity& r);
json to_json(const CurvatureLawReport& r);

// one-way geometry emitters
std::string profile_to_svg(const RadialProfile& profile);
std::string profile_to_obj(const RadialProfile& profile);

}  // namespace convgeom

#endif
