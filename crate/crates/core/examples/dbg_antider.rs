use finitegap::jet::*;

fn main() {
    // a_1 reference = (-2 w_xx - 3 w (u_x v_x + w_x^2)) / (4w)
    let w = JetExpr::w();
    let wx = w.jet_derive();
    let wxx = w.jet_derive_n(2);
    let a1 = (JetExpr::int(-2) * wxx
        - JetExpr::int(3) * w.clone() * (JetExpr::u(1) * JetExpr::v(1) + wx.pow(2)))
        / (JetExpr::int(4) * w.clone());
    println!("a1 canonical: num terms = {}", a1.numerator().num_terms());
    println!("a1 den: {}", a1.denominator());
    let da = a1.jet_derive();
    println!("da: num terms = {}, den = {}", da.numerator().num_terms(), da.denominator());
    match antiderivative(&da) {
        Ok(x) => {
            println!("antiderivative found, equal to a1: {}", x == a1);
            println!("x = {}", x);
        }
        Err(e) => println!("ERROR: {e}"),
    }
}
