use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

use mediagraph_ffi::*;

fn core_fixture(name: &str) -> CString {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name);
    CString::new(p.to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    let p = mg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    mg_string_free(s);
    out
}

fn build_mini() -> *mut MgGraph {
    let mut g = ptr::null_mut();
    let status = unsafe { mg_graph_build_builtin(core_fixture("mini_corpus.jsonl").as_ptr(), ptr::null(), &mut g) };
    assert_eq!(status, MgStatus::Ok);
    assert!(!g.is_null());
    g
}

#[test]
fn builtin_build_matches_golden_graph() {
    let g = build_mini();
    let mut golden = ptr::null_mut();
    unsafe {
        assert_eq!(
            mg_graph_load_json(core_fixture("mini_graph.golden.json").as_ptr(), &mut golden),
            MgStatus::Ok
        );
        let (mut v, mut e) = (0usize, 0usize);
        assert_eq!(mg_graph_vertex_count(g, &mut v), MgStatus::Ok);
        assert_eq!(mg_graph_edge_count(g, &mut e), MgStatus::Ok);
        assert_eq!((v, e), (25, 20));

        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(mg_graph_to_json(g, &mut a), MgStatus::Ok);
        assert_eq!(mg_graph_to_json(golden, &mut b), MgStatus::Ok);
        assert_eq!(take(a), take(b));
        mg_graph_free(g);
        mg_graph_free(golden);
    }
}

#[test]
fn json_round_trip_through_handles() {
    let g = build_mini();
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(mg_graph_to_json(g, &mut s), MgStatus::Ok);
        let text = CString::new(take(s)).unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(mg_graph_from_json(text.as_ptr(), &mut h), MgStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(mg_graph_to_json(h, &mut again), MgStatus::Ok);
        assert_eq!(take(again), text.to_str().unwrap());
        mg_graph_free(h);
        mg_graph_free(g);
    }
}

#[test]
fn summary_is_deterministic_json() {
    let g = build_mini();
    unsafe {
        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(mg_graph_summary_json(g, MgWeight::Frequency, 7, &mut a), MgStatus::Ok);
        assert_eq!(mg_graph_summary_json(g, MgWeight::Frequency, 7, &mut b), MgStatus::Ok);
        let (a, b) = (take(a), take(b));
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["vertex_count"], 25);
        assert_eq!(v["meta"]["seed"], 7);
        assert_eq!(v["meta"]["weight_source"], "frequency");
        mg_graph_free(g);
    }
}

#[test]
fn export_writes_files_and_rejects_unsupported_color() {
    let g = build_mini();
    let dir = tempfile::tempdir().unwrap();
    let gexf = dir.path().join("g.gexf");
    let csv = dir.path().join("g.csv");
    let gexf_c = CString::new(gexf.to_str().unwrap()).unwrap();
    let csv_c = CString::new(csv.to_str().unwrap()).unwrap();
    unsafe {
        assert_eq!(
            mg_graph_export(g, gexf_c.as_ptr(), MgFormat::Gexf, MgColor::Community, 0),
            MgStatus::Ok
        );
        let text = std::fs::read_to_string(&gexf).unwrap();
        assert!(text.contains("viz:color"));
        assert_eq!(text.matches("<node ").count(), 25);

        assert_eq!(
            mg_graph_export(g, csv_c.as_ptr(), MgFormat::CsvEdges, MgColor::Community, 0),
            MgStatus::Unsupported
        );
        assert!(last_error().contains("unsupported export"));
        assert_eq!(
            mg_graph_export(g, csv_c.as_ptr(), MgFormat::CsvEdges, MgColor::None, 0),
            MgStatus::Ok
        );
        assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 21);
        mg_graph_free(g);
    }
}

#[test]
fn contrast_of_a_graph_with_itself_is_empty() {
    let g = build_mini();
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(
            mg_contrast_json(g, g, mg_contrast_params_default(), &mut s),
            MgStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["report"]["shared_vertices"], 25);
        assert_eq!(v["report"]["edge_items"].as_array().unwrap().len(), 0);
        assert!(v["subgraph"].is_object());

        let mut bad = mg_contrast_params_default();
        bad.min_abs_pol = 1.5;
        assert_eq!(mg_contrast_json(g, g, bad, &mut s), MgStatus::InvalidInput);
        mg_graph_free(g);
    }
}

#[test]
fn contrast_defaults_match_core() {
    let p = mg_contrast_params_default();
    assert_eq!((p.min_freq, p.min_degree, p.top_k), (3, 3, 20));
    assert_eq!(p.min_abs_pol, 0.05);
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(mg_graph_load_json(ptr::null(), &mut g), MgStatus::NullArgument);
        assert!(g.is_null());
        assert!(last_error().contains("path"));

        let missing = CString::new("/nonexistent/graph.json").unwrap();
        assert_eq!(mg_graph_load_json(missing.as_ptr(), &mut g), MgStatus::Io);

        let junk = CString::new("{\"vertices\": 3}").unwrap();
        assert_eq!(mg_graph_from_json(junk.as_ptr(), &mut g), MgStatus::InvalidInput);
        assert!(g.is_null());

        let dir = tempfile::tempdir().unwrap();
        let corpus = dir.path().join("c.jsonl");
        std::fs::write(&corpus, "{\"id\":\"a\",\"title\":\"T\",\"body\":\"B.\"}\n{not json\n").unwrap();
        let corpus = CString::new(corpus.to_str().unwrap()).unwrap();
        let label = CString::new("X").unwrap();
        assert_eq!(
            mg_graph_build_builtin(corpus.as_ptr(), label.as_ptr(), &mut g),
            MgStatus::Parse
        );
        assert!(last_error().contains(":2:"), "{}", last_error());

        let bad_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(
            mg_graph_from_json(bad_utf8.as_ptr().cast(), &mut g),
            MgStatus::InvalidUtf8
        );

        let mut n = 0usize;
        assert_eq!(mg_graph_vertex_count(ptr::null(), &mut n), MgStatus::NullArgument);
        assert_eq!(
            mg_graph_build_builtin(missing.as_ptr(), ptr::null(), ptr::null_mut()),
            MgStatus::NullArgument
        );
    }
}

#[test]
fn success_clears_last_error() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(mg_graph_load_json(ptr::null(), &mut g), MgStatus::NullArgument);
        assert!(!mg_last_error().is_null());
    }
    let g = build_mini();
    assert!(mg_last_error().is_null());
    unsafe { mg_graph_free(g) };
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        mg_graph_free(ptr::null_mut());
        mg_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(mg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
