from http.server import BaseHTTPRequestHandler
import json
import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))
from minimizer import minimize_document
from system_elements.errors import RefinementError


class handler(BaseHTTPRequestHandler):

    def do_POST(self):
        length = int(self.headers['Content-Length'])
        body = self.rfile.read(length).decode('utf-8')
        try:
            output = minimize_document(json.loads(body))
            status = 200
        except (RefinementError, ValueError) as e:
            output = {'error': str(e)}
            status = 400
        self.send_response(status)
        self.send_header('Content-type', 'application/json')
        self.end_headers()
        self.wfile.write(json.dumps(output).encode('utf-8'))
