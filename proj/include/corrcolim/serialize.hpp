#ifndef CORRCOLIM_SERIALIZE_HPP
#define CORRCOLIM_SERIALIZE_HPP

#include "corrcolim/concrete_eval.hpp"
#include "corrcolim/repcheck.hpp"

#include "json.hpp"

namespace corrcolim {

using Json = nlohmann::json;

// Twelve significant digits, with near-integers and tiny values snapped.
double report_float(double x);

Json to_json(cplx z);
Json to_json(const Mat& m);  // rows of [re, im]
Json to_json(const Algebra& a);
Json to_json(const Report& r);
Json to_json(const ClosedForm& c);
Json to_json(const Presentation& p);
Json to_json(const Correspondence& c);
Json to_json(const CorrFunctor& f);
Json to_json(const Transformation& t);
Json to_json(const RepAssignment& r, const Presentation& p);
Json to_json(const Wedderburn& w);
Json to_json(const ChainEval& c);

cplx complex_from_json(const Json& j);
Mat matrix_from_json(const Json& j);
Algebra algebra_from_json(const Json& j);
Presentation presentation_from_json(const Json& j);
RepAssignment assignment_from_json(const Json& j, const Presentation& p);

// Sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace corrcolim

#endif
