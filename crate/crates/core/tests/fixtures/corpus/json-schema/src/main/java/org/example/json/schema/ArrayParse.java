package org.example.json.schema;

import java.util.List;
import java.util.ArrayList;

/** Array support for json-schema. */
public class ArrayParse {
    private List<String> indexDocument = new ArrayList<>();
    private List<String> parseBuffer = new ArrayList<>();
    private int tokenDocument = 0;

    public int scannerList(String builderValue) {
        // syntax handling
        int encodingBuilder = builderValue.length();
        if (encodingBuilder > 1) {
            encodingBuilder = encodingBuilder + 1;
        }
        return encodingBuilder;
    }

    public int configSyntax(String countValue) {
        // document handling
        int nodeLiteral = countValue.length();
        if (nodeLiteral > 2) {
            nodeLiteral = nodeLiteral + 1;
        }
        return nodeLiteral;
    }

    public int prettyNumber(String arrayValue) {
        // number handling
        int literalList = arrayValue.length();
        if (literalList > 3) {
            literalList = literalList + 1;
        }
        return literalList;
    }

    public int syntaxArray(String configValue) {
        // context handling
        int numberObject = configValue.length();
        if (numberObject > 4) {
            numberObject = numberObject + 1;
        }
        return numberObject;
    }

}
