from flask import Flask, request, jsonify
from flask_cors import CORS
from config.schemas import ExperimentConfig, GinConfig
from config.settings import settings
from harness.runner import ExperimentRunner, with_seed
import traceback

app = Flask(__name__)
CORS(app)  # Habilita CORS para chamadas de frontend

runner = ExperimentRunner()

# Limite de frames por ponto numa varredura disparada pela API
MAX_API_FRAMES = 20000


def _status(result) -> int:
    return 200 if result["success"] else 400


@app.route('/health', methods=['GET'])
def health_check():
    """Endpoint de health check"""
    return jsonify({
        "status": "healthy",
        "threads": settings.THREADS,
        "version": "1.0.0"
    }), 200


@app.route('/api/codes', methods=['GET'])
def list_codes():
    """Lista os códigos do banco (nome, n, m, k, taxa)"""
    result = runner.list_codes()
    return jsonify(result), _status(result)


@app.route('/api/decode', methods=['POST'])
def decode():
    """
    Decodifica LLRs

    Body JSON:
    {
        "llr": [...] ou [[...], ...],
        "code": {"name": "HAMMING_7_4"},
        "decoder": {"variant": "plain", "iterations": 5}
    }
    """
    try:
        data = request.get_json(silent=True)

        if not data:
            return jsonify({
                "success": False,
                "error": "Body JSON não fornecido"
            }), 400

        if "llr" not in data:
            return jsonify({
                "success": False,
                "error": "Campo 'llr' é obrigatório"
            }), 400

        result = runner.decode(data["llr"], data.get("code"), data.get("decoder"))
        return jsonify(result), _status(result)

    except Exception as e:
        print(f"[API] Erro no endpoint /decode: {str(e)}")
        traceback.print_exc()

        return jsonify({
            "success": False,
            "error": f"Erro interno do servidor: {str(e)}",
            "type": type(e).__name__
        }), 500


@app.route('/api/sweep', methods=['POST'])
def sweep():
    """
    Varredura BER x Eb/N0 (sem gravar CSV)

    Body JSON: tabelas do experimento ({"code": {...}, "decoder": {...}, "sweep": {...}})
    e opcionalmente "seed".
    """
    try:
        data = request.get_json(silent=True) or {}
        seed = data.pop("seed", None)
        config = with_seed(ExperimentConfig.model_validate(data), seed)

        if config.sweep.max_frames > MAX_API_FRAMES:
            return jsonify({
                "success": False,
                "error": f"max_frames acima do limite da API ({MAX_API_FRAMES}); use a CLI"
            }), 400

        result = runner.sweep(config, write=False)
        return jsonify(result), _status(result)

    except Exception as e:
        print(f"[API] Erro no endpoint /sweep: {str(e)}")

        return jsonify({
            "success": False,
            "error": str(e),
            "type": type(e).__name__
        }), 400


@app.route('/api/gradcheck', methods=['POST'])
def gradcheck():
    """
    Suíte de verificação de gradientes

    Body JSON (opcional): {"cases": 100, "seed": 0}
    """
    data = request.get_json(silent=True) or {}
    try:
        cases = int(data.get("cases", 100))
        seed = int(data.get("seed", 0))
    except (TypeError, ValueError):
        return jsonify({
            "success": False,
            "error": "'cases' e 'seed' devem ser inteiros"
        }), 400

    result = runner.gradcheck(num_cases=cases, seed=seed)
    return jsonify(result), _status(result)


@app.route('/api/gin/eval', methods=['POST'])
def gin_eval():
    """Acurácia de um checkpoint de GIN (Body JSON: campos de GinConfig, com 'checkpoint')"""
    data = request.get_json(silent=True) or {}
    try:
        config = ExperimentConfig(gin=GinConfig.model_validate(data))
    except Exception as e:
        return jsonify({"success": False, "error": str(e)}), 400
    result = runner.gin_eval(config)
    return jsonify(result), _status(result)


@app.errorhandler(404)
def not_found(error):
    return jsonify({
        "success": False,
        "error": "Endpoint não encontrado"
    }), 404


@app.errorhandler(500)
def internal_error(error):
    return jsonify({
        "success": False,
        "error": "Erro interno do servidor"
    }), 500


if __name__ == '__main__':
    settings.validate()
    print("\n" + "="*50)
    print("🚀 INICIANDO FLASK API")
    print("="*50)
    print(f"Banco de códigos: {settings.CODES_PATH}")
    print(f"Workers: {settings.THREADS}")
    print("\nEndpoints disponíveis:")
    print("  - GET  /health")
    print("  - GET  /api/codes")
    print("  - POST /api/decode")
    print("  - POST /api/sweep")
    print("  - POST /api/gradcheck")
    print("  - POST /api/gin/eval")
    print("="*50 + "\n")

    app.run(host='0.0.0.0', port=5000, debug=True)
