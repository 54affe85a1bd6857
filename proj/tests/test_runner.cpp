// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "pbbem/runner.hpp"

using namespace pbbem;

namespace
{

namespace fs = std::filesystem;

RunConfig sphere_config(const std::string &id, int level = 1)
{
  RunConfig c;
  c.input.sphere = SphereInput{4.0, level};
  c.case_id = id;
  return c;
}

fs::path scratch(const std::string &name)
{
  const fs::path dir = fs::temp_directory_path() / "pbbem_test_runner";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  fs::remove(p);
  return p;
}

std::vector<std::string> lines_of(const std::string &text)
{
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
  {
    out.push_back(line);
  }
  return out;
}

}  // namespace

TEST(Runner, ParseSphere)
{
  const auto s = parse_sphere("4:3");
  EXPECT_EQ(s.radius, 4.0);
  EXPECT_EQ(s.level, 3);
  EXPECT_EQ(parse_sphere("2.5:0").radius, 2.5);
  for (const char *bad : {"4", "4:", ":3", "x:2", "4:2x", "-1:2", "4:8", "4:-1"})
  {
    EXPECT_THROW(parse_sphere(bad), ValidationError) << bad;
  }
}

TEST(Runner, LoadProblemGeometryChoice)
{
  RunInput none;
  EXPECT_THROW(load_problem(none), ValidationError);

  RunInput both;
  both.sphere = SphereInput{};
  both.mesh = "whatever.off";
  EXPECT_THROW(load_problem(both), ValidationError);

  RunInput sphere;
  sphere.sphere = SphereInput{4.0, 1};
  const auto p = load_problem(sphere);
  EXPECT_EQ(p.mesh.num_vertices(), 42);
  ASSERT_EQ(p.charges.size(), 1u);
  EXPECT_EQ(p.charges.atoms[0].charge, 1.0);
}

TEST(Runner, LoadProblemRejectsChargeOutside)
{
  const auto pqr = scratch("outside.pqr");
  std::ofstream(pqr) << "ATOM      1  N   ARG     1       9.000   0.000   0.000  1.0000 1.8240\n";
  RunInput in;
  in.sphere = SphereInput{4.0, 1};
  in.pqr = pqr;
  EXPECT_THROW(load_problem(in), ValidationError);
}

TEST(Runner, ResolveNeedsExactlyOne)
{
  RunConfig c;
  EXPECT_THROW(c.resolve(), ValidationError);
  c.case_id = "10";
  EXPECT_EQ(c.resolve().formulation, FormulationKind::Juffer);
  c.explicit_spec = find_case("12");
  EXPECT_THROW(c.resolve(), ValidationError);
  c.case_id.reset();
  EXPECT_EQ(c.resolve().formulation, FormulationKind::Lu);
  c.case_id = "no-such-case";
  c.explicit_spec.reset();
  EXPECT_THROW(c.resolve(), ValidationError);
}

TEST(Runner, CsvHeader)
{
  std::ostringstream out;
  write_csv_header(out);
  EXPECT_EQ(out.str(),
            "case,dof,t_lhs,t_rhs,t_precond,t_gmres,t_energy,t_total,iterations,t_per_iter,"
            "delta_G_kcal_mol,converged\n");
}

TEST(Runner, EmptySuiteWritesHeaderOnly)
{
  std::ostringstream out;
  EXPECT_TRUE(run_suite({}, out).empty());
  EXPECT_EQ(lines_of(out.str()).size(), 1u);
}

TEST(Runner, SingleCaseReport)
{
  const auto r = run_case(sphere_config("10"));
  EXPECT_EQ(r.case_id, "10");
  EXPECT_EQ(r.dof, 84);
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.error.empty());
  EXPECT_GT(r.iterations, 0);
  EXPECT_LT(r.delta_g, 0.0);
  EXPECT_GE(r.timings.total, r.timings.gmres);
  EXPECT_NEAR(r.time_per_iteration * r.iterations, r.timings.gmres, 1e-12);
  EXPECT_FALSE(r.spectrum.has_value());
}

TEST(Runner, ExplicitSpecEqualsCase)
{
  const auto a = run_case(sphere_config("17"));
  RunConfig c = sphere_config("17");
  c.case_id.reset();
  c.explicit_spec = find_case("17");
  c.explicit_spec->id = "pmchwt_internal/calderon_interior";
  const auto b = run_case(c);
  EXPECT_EQ(b.case_id, "pmchwt_internal/calderon_interior");
  EXPECT_EQ(a.delta_g, b.delta_g);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Runner, EnergyIndependentOfPreconditioner)
{
  std::vector<RunConfig> configs;
  for (const char *id : {"1", "2", "9", "10", "15", "16", "17", "23"})
  {
    configs.push_back(sphere_config(id, 2));
    configs.back().solver.tol = 1e-10;
  }
  std::ostringstream out;
  const auto reports = run_suite(configs, out);
  for (const auto &r : reports)
  {
    ASSERT_TRUE(r.converged) << r.case_id;
  }
  EXPECT_NEAR(reports[1].delta_g, reports[0].delta_g, 1e-7 * std::abs(reports[0].delta_g));
  EXPECT_NEAR(reports[3].delta_g, reports[2].delta_g, 1e-7 * std::abs(reports[2].delta_g));
  for (int i = 5; i < 8; ++i)
  {
    EXPECT_NEAR(reports[i].delta_g, reports[4].delta_g, 1e-7 * std::abs(reports[4].delta_g))
        << reports[i].case_id;
  }
}

TEST(Runner, SuiteRecordsFailureAndContinues)
{
  std::vector<RunConfig> configs{sphere_config("10"), sphere_config("99"), sphere_config("12")};
  std::ostringstream out;
  const auto reports = run_suite(configs, out);
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_TRUE(reports[0].error.empty());
  EXPECT_FALSE(reports[1].error.empty());
  EXPECT_EQ(reports[1].case_id, "99");
  EXPECT_TRUE(std::isnan(reports[1].delta_g));
  EXPECT_TRUE(reports[2].converged);
  const auto rows = lines_of(out.str());
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[2].substr(0, 3), "99,");
  EXPECT_NE(rows[2].find(",false"), std::string::npos);
}

TEST(Runner, SuiteDeterministic)
{
  std::vector<RunConfig> configs{sphere_config("1"), sphere_config("16"), sphere_config("23b")};
  std::ostringstream a, b;
  const auto ra = run_suite(configs, a);
  const auto rb = run_suite(configs, b);
  for (std::size_t i = 0; i < ra.size(); ++i)
  {
    EXPECT_EQ(ra[i].delta_g, rb[i].delta_g) << ra[i].case_id;
    EXPECT_EQ(ra[i].iterations, rb[i].iterations) << ra[i].case_id;
  }
}

TEST(Runner, ResultsFileAppends)
{
  const auto path = scratch("results.csv");
  RunConfig c = sphere_config("9");
  c.results_path = path;
  run_case(c);
  c.case_id = "11";
  run_case(c);
  std::ifstream f(path);
  std::stringstream text;
  text << f.rdbuf();
  const auto rows = lines_of(text.str());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], csv_header);
  EXPECT_EQ(rows[1].substr(0, 2), "9,");
  EXPECT_EQ(rows[2].substr(0, 3), "11,");
}

TEST(Runner, SpectrumDump)
{
  const auto path = scratch("spectrum.csv");
  RunConfig c = sphere_config("10");
  c.spectrum_path = path;
  const auto r = run_case(c);
  ASSERT_TRUE(r.spectrum.has_value());
  EXPECT_EQ(r.spectrum->eigenvalues.size(), 84u);
  ASSERT_EQ(r.spectrum->predicted_points.size(), 1u);
  std::ifstream f(path);
  std::stringstream text;
  text << f.rdbuf();
  const auto rows = lines_of(text.str());
  ASSERT_EQ(rows.size(), 85u);
  EXPECT_EQ(rows[0].rfind("# case=10 matrix=preconditioned", 0), 0u);
}
