use std::process::{Command, Output};

use serde_json::Value;

fn hobo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hobo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Text rendering rebuilt from the JSON document, independent of the binary's renderer.
fn text_from_json(doc: &Value) -> String {
    fn real(v: &Value) -> String {
        let x = v.as_f64().unwrap();
        if x.fract() == 0.0 {
            format!("{x:.1}")
        } else {
            format!("{x}")
        }
    }
    fn grid(v: &Value, depth: usize) -> String {
        match v {
            Value::Array(items) if items.first().is_some_and(Value::is_array) => {
                let rows: Vec<String> = items.iter().map(|r| grid(r, depth + 1)).collect();
                format!("[{}]", rows.join(&format!("\n{}", " ".repeat(depth + 1))))
            }
            Value::Array(items) => {
                let cells: Vec<String> = items.iter().map(|c| c.to_string()).collect();
                format!("[{}]", cells.join(" "))
            }
            other => other.to_string(),
        }
    }
    let mut out = format!("offset\n{}\n", real(&doc["offset"]));
    for e in doc["entries"].as_array().unwrap() {
        out += &format!(
            "Energy {}, Occurrence {}\n",
            real(&e["energy"]),
            e["occurrence"]
        );
        let grids = e["grids"].as_array().unwrap();
        let values = e["values"].as_array().unwrap();
        for g in grids {
            out += &grid(&g["cells"], 0);
            out += "\n";
        }
        for v in values {
            out += &format!("{} = {}\n", v["label"].as_str().unwrap(), real(&v["value"]));
        }
        if grids.is_empty() && values.is_empty() {
            out += &grid(&e["assignment"], 0);
            out += "\n";
        }
    }
    out
}

#[test]
fn solve_prints_offset_then_entries() {
    let o = hobo(&["solve", "pythagoras", "--shots", "2000", "--top", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(
        text.starts_with("offset\n30.0\nEnergy -30.0, Occurrence "),
        "{text}"
    );
    assert_eq!(text.matches("Energy -30.0").count(), 3);
    assert!(text.contains("\nz = "));
}

#[test]
fn json_and_text_carry_the_same_data() {
    for name in ["seating", "pythagoras", "tsp"] {
        let args = [
            "solve", name, "--shots", "300", "--sweeps", "200", "--top", "3", "--seed", "7",
        ];
        let text = hobo(&args);
        let mut with_json = args.to_vec();
        with_json.push("--json");
        let json = hobo(&with_json);
        assert!(text.status.success() && json.status.success());
        let doc: Value = serde_json::from_str(&stdout(&json)).unwrap();
        assert_eq!(doc["shots"], 300);
        assert_eq!(text_from_json(&doc), stdout(&text), "{name}");
    }
}

#[test]
fn example_offsets() {
    for (name, offset) in [("seating", "0.0"), ("pythagoras", "30.0"), ("tsp", "360.0")] {
        let o = hobo(&[
            "example", name, "--run", "--shots", "10", "--sweeps", "5", "--top", "1",
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(
            stdout(&o).starts_with(&format!("offset\n{offset}\n")),
            "{name}"
        );
    }
}

#[test]
fn example_written_to_file_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("tsp.hobo");
    let o = hobo(&["example", "tsp", "-o", file.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = hobo(&[
        "solve",
        file.to_str().unwrap(),
        "--shots",
        "500",
        "--top",
        "1",
    ]);
    assert!(
        stdout(&o).starts_with("offset\n360.0\nEnergy -360.0"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn path_report_on_tsp() {
    let o = hobo(&["path", "tsp"]);
    let text = stdout(&o);
    assert!(text.contains("  Complete contraction:  i,j,k,l,m,n,ijklmn->\n"));
    assert!(text.contains("      Naive FLOP count:  3.266e+05\n"));
    assert!(text.contains("   Theoretical speedup:  2.917\n"));
    assert!(text.contains("  Largest intermediate:  7.776e+03 elements\n"));
    let o = hobo(&["path", "tsp", "--planner", "optimal", "--json"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["report"]["optimized_flops"], 94044.0);
}

#[test]
fn tt_report_on_tsp() {
    let o = hobo(&["tt", "tsp"]);
    let text = stdout(&o);
    assert!(
        text.starts_with("[(6, 2), (2, 6, 3), (3, 6, 4), (4, 6, 4), (4, 6, 2), (2, 6)]\n"),
        "{text}"
    );
    assert!(text.contains("      Naive FLOP count:  1.075e+08\n"));
    let o = hobo(&["tt", "tsp", "--json"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["cores"][0], serde_json::json!([6, 2]));
}

#[test]
fn term_list_input() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.json");
    std::fs::write(&file, r#"{"num_vars": 2, "terms": [{"vars": [0], "coeff": -1.0}, {"vars": [0, 1], "coeff": 3.0}], "constant": 2.5}"#).unwrap();
    let o = hobo(&[
        "solve",
        file.to_str().unwrap(),
        "--shots",
        "50",
        "--top",
        "1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "offset\n2.5\nEnergy -1.0, Occurrence 50\n[1 0]\n"
    );
}

#[test]
fn ppm_image_of_the_best_grid() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("seats.ppm");
    let o = hobo(&[
        "solve",
        "seating",
        "--shots",
        "200",
        "--ppm",
        file.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let bytes = std::fs::read(&file).unwrap();
    let header = b"P6\n80 80\n255\n";
    assert_eq!(&bytes[..header.len()], header);
    assert_eq!(bytes.len(), header.len() + 80 * 80 * 3);
    let o = hobo(&[
        "solve",
        "tsp",
        "--shots",
        "10",
        "--ppm",
        file.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_1_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.hobo");
    std::fs::write(&file, "var q[2] as \"q{}\"\nH += q[0] * r[1]\n").unwrap();
    let o = hobo(&["solve", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2, column 13"), "{}", stderr(&o));
    let o = hobo(&["solve", dir.path().join("missing.hobo").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn capability_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("wide.hobo");
    let factors: Vec<String> = (0..6).map(|k| format!("x[{}]", k * 11)).collect();
    let singles: String = (0..60).map(|k| format!("H += x[{k}]\n")).collect();
    std::fs::write(
        &file,
        format!(
            "var x[60] as \"x{{}}\"\nH += {}\n{singles}",
            factors.join("*")
        ),
    )
    .unwrap();
    let o = hobo(&["path", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert_eq!(
        hobo(&["path", "tsp", "--planner", "fastest"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hobo(&["solve", "tsp", "--sampler", "quantum"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(hobo(&["tt", "tsp", "--tol", "1.5"]).status.code(), Some(2));
    assert_eq!(
        hobo(&["solve", "tsp", "--shots", "0"]).status.code(),
        Some(2)
    );
}
