use std::ffi::CString;
use std::ptr;

use fuzzy_lsde_ffi::*;

struct Solution(*mut FlsdeSolution);

impl Drop for Solution {
    fn drop(&mut self) {
        unsafe { flsde_solution_free(self.0) };
    }
}

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    let len = unsafe { flsde_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(len > 0);
    unsafe { std::ffi::CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

fn example1() -> Solution {
    let a = [3.0, -1.0, 4.0, -2.0];
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(flsde_problem_new(2, a.as_ptr(), 0.0, &mut p), FlsdeStatus::Ok);
        let f1 = [-25.0, -15.0, 5.0];
        let f2 = [-40.0, -10.0, 10.0];
        assert_eq!(flsde_problem_set_forcing(p, 0, f1.as_ptr(), 3), FlsdeStatus::Ok);
        assert_eq!(flsde_problem_set_forcing(p, 1, f2.as_ptr(), 3), FlsdeStatus::Ok);
        assert_eq!(
            flsde_problem_set_triangular(p, 0, 14.5, 15.0, 16.0),
            FlsdeStatus::Ok
        );
        assert_eq!(flsde_problem_set_triangular(p, 1, 4.0, 6.0, 9.0), FlsdeStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(flsde_solve(p, 0.5, 1e-3, &mut s), FlsdeStatus::Ok);
        flsde_problem_free(p);
        Solution(s)
    }
}

#[test]
fn builds_and_queries_a_solution() {
    let s = example1();
    unsafe {
        assert_eq!(flsde_solution_dim(s.0), 2);
        let mut b = [0.0; 2];
        assert_eq!(flsde_solution_b_cr(s.0, b.as_mut_ptr()), FlsdeStatus::Ok);
        assert_eq!(b, [15.0, 6.0]);

        let mut x = [0.0; 2];
        assert_eq!(
            flsde_solution_crisp_state(s.0, 0.25, x.as_mut_ptr()),
            FlsdeStatus::Ok
        );
        let t: f64 = 0.25;
        let want = 5.0 * (t + 2.0) + (-t).exp() / 3.0 + 14.0 / 3.0 * (2.0 * t).exp();
        assert!((x[0] - want).abs() < 1e-9);

        let mut mu = 0.0;
        assert_eq!(
            flsde_solution_membership(s.0, x.as_ptr(), 0.25, &mut mu),
            FlsdeStatus::Ok
        );
        assert!((mu - 1.0).abs() < 1e-12);

        let (mut c, mut g, mut lo, mut hi) = ([0.0; 2], [0.0; 4], [0.0; 2], [0.0; 2]);
        let status = flsde_solution_alpha_cut(
            s.0,
            0.0,
            0.5,
            c.as_mut_ptr(),
            g.as_mut_ptr(),
            lo.as_mut_ptr(),
            hi.as_mut_ptr(),
        );
        assert_eq!(status, FlsdeStatus::Ok);
        assert_eq!(c, [15.0, 6.0]);
        assert_eq!(g, [1.0, 0.0, 0.0, 1.0]);
        assert_eq!(lo, [-0.25, -1.0]);
        assert_eq!(hi, [0.5, 1.5]);
    }
}

#[test]
fn solves_json_scenarios() {
    let json = CString::new(
        r#"{"n":2,"A":[-3,2,3,-4],"forcing":[[1],[2]],"t0":0,"t_end":1,"h":0.001,
            "initial":[{"type":"triangular","a":70,"c":100,"b":130},
                       {"type":"triangular","a":70,"c":100,"b":130}]}"#,
    )
    .unwrap();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(flsde_solve_scenario_json(json.as_ptr(), &mut s), FlsdeStatus::Ok);
        let s = Solution(s);
        let mut mu = 0.0;
        let p = [130.0, 100.0];
        assert_eq!(
            flsde_solution_membership(s.0, p.as_ptr(), 0.0, &mut mu),
            FlsdeStatus::Ok
        );
        assert_eq!(mu, 0.0);
    }
}

#[test]
fn reports_errors_by_status() {
    let a = [1.0, 2.0, 3.0, 4.0];
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(
            flsde_problem_new(2, ptr::null(), 0.0, &mut p),
            FlsdeStatus::NullPointer
        );
        assert_eq!(
            flsde_problem_new(2, a.as_ptr(), 0.0, ptr::null_mut()),
            FlsdeStatus::NullPointer
        );
        assert_eq!(flsde_problem_new(2, a.as_ptr(), 0.0, &mut p), FlsdeStatus::Ok);

        assert_eq!(
            flsde_problem_set_triangular(p, 1, 3.0, 2.0, 4.0),
            FlsdeStatus::InvalidInput
        );
        assert!(last_error().contains("component 1"), "{}", last_error());
        assert_eq!(
            flsde_problem_set_triangular(p, 5, 1.0, 2.0, 3.0),
            FlsdeStatus::InvalidInput
        );

        let mut s = ptr::null_mut();
        assert_eq!(flsde_solve(p, 1.0, 1e-3, &mut s), FlsdeStatus::InvalidInput);
        assert!(last_error().contains("not set"));
        assert!(s.is_null());

        assert_eq!(flsde_problem_set_triangular(p, 0, 0.0, 1.0, 2.0), FlsdeStatus::Ok);
        assert_eq!(flsde_problem_set_triangular(p, 1, 0.0, 1.0, 2.0), FlsdeStatus::Ok);
        let b = [1.0, 5.0];
        assert_eq!(flsde_problem_set_b_cr(p, b.as_ptr(), 2), FlsdeStatus::Ok);
        assert_eq!(flsde_solve(p, 1.0, 1e-3, &mut s), FlsdeStatus::InvalidInput);
        flsde_problem_free(p);

        let big = [800.0];
        assert_eq!(flsde_problem_new(1, big.as_ptr(), 0.0, &mut p), FlsdeStatus::Ok);
        assert_eq!(flsde_problem_set_triangular(p, 0, 0.0, 1.0, 2.0), FlsdeStatus::Ok);
        assert_eq!(flsde_solve(p, 1.0, 1e-3, &mut s), FlsdeStatus::Numeric);
        flsde_problem_free(p);

        assert_eq!(flsde_solution_dim(ptr::null()), 0);
        assert_eq!(
            flsde_solution_b_cr(ptr::null(), ptr::null_mut()),
            FlsdeStatus::NullPointer
        );
        let bad = CString::new("{").unwrap();
        assert_eq!(
            flsde_solve_scenario_json(bad.as_ptr(), &mut s),
            FlsdeStatus::InvalidInput
        );
        flsde_problem_free(ptr::null_mut());
        flsde_solution_free(ptr::null_mut());
    }
}

#[test]
fn truncates_error_messages() {
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(
            flsde_problem_new(0, ptr::null(), 0.0, &mut p),
            FlsdeStatus::InvalidInput
        );
        let full = flsde_last_error(ptr::null_mut(), 0);
        let mut buf = [1 as std::ffi::c_char; 4];
        assert_eq!(flsde_last_error(buf.as_mut_ptr(), buf.len()), full);
        assert_eq!(buf[3], 0);
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = include_str!("../include/fuzzy_lsde.h");
    for name in [
        "flsde_last_error",
        "flsde_problem_new",
        "flsde_problem_free",
        "flsde_problem_set_forcing",
        "flsde_problem_set_triangular",
        "flsde_problem_set_parametric",
        "flsde_problem_set_b_cr",
        "flsde_solve",
        "flsde_solve_scenario_json",
        "flsde_solution_free",
        "flsde_solution_dim",
        "flsde_solution_b_cr",
        "flsde_solution_crisp_state",
        "flsde_solution_membership",
        "flsde_solution_alpha_cut",
        "typedef struct FlsdeProblem FlsdeProblem;",
        "FLSDE_STATUS_NUMERIC = 3",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
