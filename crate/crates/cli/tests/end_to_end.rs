use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pidtw::oracle::bf_treewidth;
use pidtw::Graph;
use pidtw_cli::{lower_bound, read_graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tw")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exact_writes_a_valid_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["myciel3.col", "myciel4.col", "queen5_5.col", "jean.col", "miles250.col"] {
        let input = data(name);
        let input = input.to_str().unwrap();
        let td = dir.path().join(format!("{name}.td"));
        let stats = dir.path().join(format!("{name}.json"));
        let o = tw(&["exact", input, "-o", td.to_str().unwrap(), "--stats", stats.to_str().unwrap()]);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        let width = stdout(&o);
        let v = tw(&["validate", input, td.to_str().unwrap()]);
        assert!(v.status.success(), "{name}: {}", stdout(&v));
        assert_eq!(stdout(&v), width, "{name}");

        let plain = tw(&["exact", "--no-safe-separators", input]);
        assert_eq!(stdout(&plain), width, "{name}");
        let par = tw(&["exact", "--jobs", "3", input]);
        assert_eq!(stdout(&par), width, "{name}");

        let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
        assert_eq!(json["tw"].to_string(), width);
        for key in ["instance", "n", "m", "time_ms"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        for key in ["iblocks", "oblocks", "pmcs_buildable", "pmcs_feasible"] {
            assert!(json["counters"].get(key).is_some(), "{key}");
        }
        for key in ["found", "max_part"] {
            assert!(json["safe_separators"].get(key).is_some(), "{key}");
        }
    }
}

#[test]
fn small_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write(dir.path(), "edge.gr", "p tw 2 1\n1 2\n");
    assert_eq!(stdout(&tw(&["exact", &edge])), "1");
    // two components, one of them an isolated vertex
    let split = write(dir.path(), "split.gr", "c two triangles and a loner\np tw 7 6\n1 2\n2 3\n1 3\n4 5\n5 6\n4 6\n");
    let td = dir.path().join("split.td");
    let o = tw(&["exact", &split, "-o", td.to_str().unwrap()]);
    assert_eq!(stdout(&o), "2");
    assert_eq!(stdout(&tw(&["validate", &split, td.to_str().unwrap()])), "2");
    let col = write(dir.path(), "k4.txt", "p edge 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n");
    assert_eq!(stdout(&tw(&["exact", "--format", "col", &col])), "3");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.gr");
    assert_eq!(tw(&["exact", missing.to_str().unwrap()]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.gr", "p tw 3 2\n1 2\n2 9\n");
    let o = tw(&["exact", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let path = write(dir.path(), "path.gr", "p tw 3 2\n1 2\n2 3\n");
    let missing_edge = write(dir.path(), "a.td", "s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n");
    let o = tw(&["validate", &path, &missing_edge]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!stdout(&o).is_empty());
    let good = write(dir.path(), "b.td", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
    let o = tw(&["validate", &path, &good]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1");
}

#[test]
fn lower_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let mut k6 = String::from("p tw 6 15\n");
    for u in 1..=6 {
        for v in u + 1..=6 {
            k6 += &format!("{u} {v}\n");
        }
    }
    let k6 = write(dir.path(), "k6.gr", &k6);
    let lb: usize = stdout(&tw(&["lb", &k6, "--time-limit", "1"])).parse().unwrap();
    assert!(lb >= 5);
    let g = read_graph(Path::new(&k6), None).unwrap();
    assert!(lower_bound(&g, std::time::Duration::ZERO).unwrap() >= g.min_degree());

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let mut edges = Vec::new();
        for v in 1..12 {
            edges.push((rng.gen_range(0..v), v));
        }
        for _ in 0..14 {
            let (a, b) = (rng.gen_range(0..12), rng.gen_range(0..12));
            if a != b {
                edges.push((a, b));
            }
        }
        let g = Graph::from_edges(12, edges).unwrap();
        let lb = lower_bound(&g, std::time::Duration::from_secs(30)).unwrap();
        assert_eq!(lb, bf_treewidth(&g).unwrap());
    }
}

#[test]
fn census_rows() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write(dir.path(), "c4.gr", "p tw 4 4\n1 2\n2 3\n3 4\n4 1\n");
    let o = tw(&["census", &c4]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("minseps_all"), "2");
    assert_eq!(col("pmcs_all"), "4");
    assert_eq!(col("tw"), "2");

    let k4 = write(dir.path(), "k4.gr", "p tw 4 6\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
    let text = stdout(&tw(&["census", &k4]));
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], "0");
    assert_eq!(row[5], "1");

    let o = tw(&["census", data("myciel4.col").to_str().unwrap(), "--max-n", "16"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().nth(1).unwrap().contains("NA"));
}
